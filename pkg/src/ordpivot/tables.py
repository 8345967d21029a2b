"""Built-in demonstration population and the design-effect report.

A 12-unit population with three study variables ships with the package so
the comparison of systematic, compromise-chain, and pivotal designs can be
reproduced offline: y1 increases with the unit order (favourable for
ordered designs), y2 is shuffled against it, y3 cycles with period N/n for
n = 4 (the bad case for a systematic start).
"""

from __future__ import annotations

from decimal import ROUND_HALF_UP, Decimal

from .analytics import (
    delta_matrix,
    ht_variance,
    markov_pikl,
    variance_closed_form,
)
from .strata import ProbabilityVector, cumulate

POPULATION_SIZE = 12

STUDY_VARIABLES: dict[str, tuple[float, ...]] = {
    "y1": (10, 10, 10, 15, 45, 45, 50, 50, 60, 60, 60, 65),
    "y2": (15, 45, 10, 60, 60, 50, 45, 65, 10, 50, 10, 60),
    "y3": (10, 45, 60, 15, 50, 65, 10, 50, 60, 10, 45, 60),
}

DESIGNS: tuple[str, ...] = ("SYS", "CMC25", "CMC50", "CMC75", "OPS")

_CMC_RHO = {"CMC25": 0.25, "CMC50": 0.50, "CMC75": 0.75}


def equal_probability_vector(N: int, n: int) -> ProbabilityVector:
    return cumulate([n / N] * N)


def round_half_away(value: float, digits: int = 2) -> float:
    """Round with ties going away from zero, as in printed tables."""
    q = Decimal(1).scaleb(-digits)
    return float(Decimal(repr(value)).quantize(q, rounding=ROUND_HALF_UP))


def design_variance(design: str, y, N: int, n: int) -> float:
    """Variance of the total estimator for one design at equal probabilities.

    SYS and OPS use their closed forms; the compromise chains go through
    their joint-probability matrix and the generic quadratic form.
    """
    if design == "SYS":
        return variance_closed_form("sys", y, N, n)
    if design == "OPS":
        return variance_closed_form("ops", y, N, n)
    if design in _CMC_RHO:
        pv = equal_probability_vector(N, n)
        dm = delta_matrix(markov_pikl(N, n, _CMC_RHO[design]))
        return ht_variance(dm, pv, y)
    raise ValueError(f"unknown design {design!r}")


def design_effect_cells(
    sample_sizes: tuple[int, ...] = (2, 4)
) -> dict[tuple[str, int, str], float]:
    """Unrounded design effects for every (design, n, variable) cell."""
    N = POPULATION_SIZE
    cells: dict[tuple[str, int, str], float] = {}
    for n in sample_sizes:
        for name, y in STUDY_VARIABLES.items():
            v_srs = variance_closed_form("srs", y, N, n)
            for design in DESIGNS:
                cells[(design, n, name)] = design_variance(design, y, N, n) / v_srs
    return cells


def flat_metric_rows(sample_sizes: tuple[int, ...] = (2, 4)) -> list[tuple[str, str, int, float]]:
    """Design effects as (metric, design, n, value) rows, rounded as printed."""
    cells = design_effect_cells(sample_sizes)
    rows = []
    for n in sample_sizes:
        for name in STUDY_VARIABLES:
            for design in DESIGNS:
                rows.append(
                    (f"deff_{name}", design, n, round_half_away(cells[(design, n, name)]))
                )
    return rows


def format_variable_table() -> str:
    header = "unit  " + "  ".join(f"{k:>4d}" for k in range(1, POPULATION_SIZE + 1))
    lines = [header]
    for name, y in STUDY_VARIABLES.items():
        lines.append(f"{name:<4}  " + "  ".join(f"{v:>4.0f}" for v in y))
    return "\n".join(lines)


def format_deff_table(sample_sizes: tuple[int, ...] = (2, 4)) -> str:
    """The design-effect comparison as an aligned text table."""
    cells = design_effect_cells(sample_sizes)
    names = list(STUDY_VARIABLES)
    head_groups = "        " + "   ".join(
        f"{'n=' + str(n):^{6 * len(names) - 2}}" for n in sample_sizes
    )
    header = "design  " + "   ".join(
        " ".join(f"{v:>5}" for v in names) for _ in sample_sizes
    )
    lines = [head_groups, header]
    for design in DESIGNS:
        vals = []
        for n in sample_sizes:
            vals.append(
                " ".join(
                    f"{round_half_away(cells[(design, n, v)]):>5.2f}" for v in names
                )
            )
        lines.append(f"{design:<7} " + "   ".join(vals))
    return "\n".join(lines)
