"""Oracle-driven verification suite.

Every check compares an implementation route against an independent one:
closed forms against exhaustive enumeration, samplers against exact
designs, analytic spectra against numerically computed ones.  The CLI
`verify` command and the acceptance tests both run these.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytics, inclusion, tables
from .strata import ProbabilityVector, build_clusters, cumulate, decompose

EIGHT_UNIT_PI = (0.2, 0.5, 0.3, 0.4, 0.9, 0.8, 0.5, 0.4)

# Frozen cluster table for the 8-unit demonstration population.
EIGHT_UNIT_CLUSTERS = ((1, 2), (3,), (4,), (5,), (), (6,), (7, 8))
EIGHT_UNIT_PSI = (0.7, 0.3, 0.4, 0.9, 0.0, 0.8, 0.9)

INSTANCE_SEED = 20240817
VARIABLE_SEED = 911


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}: {self.detail}"


def random_probabilities(N: int, n: int, gen: np.random.Generator) -> list[float]:
    """A random probability vector of length N summing to n, entries in (0,1)."""
    for _ in range(1000):
        if 2 * n <= N:
            pi = n * gen.dirichlet(np.ones(N))
        else:
            pi = 1.0 - (N - n) * gen.dirichlet(np.ones(N))
        if np.all(pi > 1e-6) and np.all(pi < 1.0 - 1e-6):
            return [float(p) for p in pi]
    raise RuntimeError(f"could not draw a valid vector for N={N}, n={n}")


def random_instances(count: int, seed: int, n_min: int = 2) -> list[ProbabilityVector]:
    gen = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        N = int(gen.integers(4, 11))
        n = int(gen.integers(n_min, N))
        out.append(cumulate(random_probabilities(N, n, gen)))
    return out


def check_cluster_table() -> CheckResult:
    pv = cumulate(EIGHT_UNIT_PI)
    cp = build_clusters(decompose(pv), pv)
    members_ok = cp.clusters == EIGHT_UNIT_CLUSTERS
    psi_err = max(abs(a - b) for a, b in zip(cp.psi, EIGHT_UNIT_PSI))
    passed = members_ok and psi_err <= 1e-9 and cp.phantom_clusters == (5,)
    return CheckResult(
        "cluster decomposition (8-unit table)",
        passed,
        f"members {'match' if members_ok else 'differ'}, max |psi error| = {psi_err:.2e}",
    )


def check_design_equivalence(instance_count: int = 200) -> CheckResult:
    worst = 0.0
    pvs = [cumulate(EIGHT_UNIT_PI)] + random_instances(instance_count, INSTANCE_SEED)
    for pv in pvs:
        d_ops = inclusion.enumerate_design("ops", pv)
        d_dss = inclusion.enumerate_design("dss", pv)
        worst = max(worst, inclusion.total_variation(d_ops, d_dss))
    passed = worst < 1e-12
    return CheckResult(
        f"pivotal/systematic design equivalence ({len(pvs)} instances)",
        passed,
        f"max total variation = {worst:.2e}",
    )


def check_pikl_closed_form(instance_count: int = 200) -> CheckResult:
    worst_entry = 0.0
    worst_row = 0.0
    pvs = [cumulate(EIGHT_UNIT_PI)] + random_instances(instance_count, INSTANCE_SEED)
    for pv in pvs:
        dec = decompose(pv)
        pm = inclusion.pikl_matrix(dec, pv)
        oracle = inclusion.design_pikl(inclusion.enumerate_design("ops", pv))
        worst_entry = max(worst_entry, float(np.max(np.abs(pm.values - oracle.values))))
        worst_row = max(worst_row, pm.row_sum_error(pv.n))
    passed = worst_entry < 1e-12 and worst_row < 1e-9
    return CheckResult(
        f"joint-probability closed form vs enumeration ({len(pvs)} instances)",
        passed,
        f"max |entry error| = {worst_entry:.2e}, max row-sum error = {worst_row:.2e}",
    )


def _transition_errors(pv: ProbabilityVector) -> float:
    """Worst gap between the closed-form step law and path enumeration."""
    dec = decompose(pv)
    cp = build_clusters(dec, pv)
    paths = inclusion.systematic_paths(cp.psi)
    n = cp.n
    worst = 0.0
    for i in range(1, n):
        margin: dict[int, float] = {}
        joint: dict[tuple[int, int], float] = {}
        for steps, p in paths:
            prev, nxt = steps[i - 1], steps[i]
            margin[prev] = margin.get(prev, 0.0) + p
            joint[(prev, nxt)] = joint.get((prev, nxt), 0.0) + p
        for prev, mass in margin.items():
            if mass <= 0.0:
                continue
            table = inclusion.transition_probabilities(cp, i, prev)
            for label in range(2 * i, 2 * i + 3):
                if label > 2 * n - 1:
                    continue
                expected = joint.get((prev, label), 0.0) / mass
                got = table.get(label, 0.0)
                worst = max(worst, abs(expected - got))
    return worst


def _marginal_errors(pv: ProbabilityVector) -> float:
    """Worst gap between the closed-form run-cluster marginals and the duel
    tree: winner and sampled-rank for every stratum, jumper up to the last
    boundary (nothing jumps out of the final stratum)."""
    dec = decompose(pv)
    cp = build_clusters(dec, pv)
    leaves = inclusion.pivotal_paths(cp.psi)
    n = cp.n
    worst = 0.0
    for i in range(1, n + 1):
        label = 2 * i - 1
        closed = inclusion.cluster_marginals(cp, i)
        w = math.fsum(p for winners, _, p in leaves if winners[i - 1] == label)
        x = math.fsum(p for winners, _, p in leaves if sorted(winners)[i - 1] == label)
        worst = max(worst, abs(w - closed.winner), abs(x - closed.selected))
        if i <= n - 1:
            j = math.fsum(p for _, jumpers, p in leaves if jumpers[i - 1] == label)
            worst = max(worst, abs(j - closed.jumper))
    return worst


def check_transitions_and_marginals(instance_count: int = 50) -> CheckResult:
    pvs = [cumulate(EIGHT_UNIT_PI)] + random_instances(instance_count, INSTANCE_SEED + 1)
    worst = 0.0
    for pv in pvs:
        worst = max(worst, _transition_errors(pv), _marginal_errors(pv))
    passed = worst < 1e-12
    return CheckResult(
        f"step transitions and cluster marginals ({len(pvs)} instances)",
        passed,
        f"max |error| = {worst:.2e}",
    )


# Expected design effects, rounded to two decimals, for the built-in
# 12-unit population: {(design, n): (y1, y2, y3)}.
EXPECTED_DEFF = {
    ("SYS", 2): (0.50, 1.39, 2.18),
    ("CMC25", 2): (0.46, 1.31, 1.91),
    ("CMC50", 2): (0.43, 1.24, 1.64),
    ("CMC75", 2): (0.39, 1.17, 1.37),
    ("OPS", 2): (0.35, 1.10, 1.10),
    ("SYS", 4): (0.27, 0.36, 5.44),
    ("CMC25", 4): (0.24, 0.61, 3.94),
    ("CMC50", 4): (0.21, 0.76, 2.81),
    ("CMC75", 4): (0.19, 0.85, 1.97),
    ("OPS", 4): (0.17, 0.95, 1.36),
}


def check_deff_table() -> CheckResult:
    cells = tables.design_effect_cells((2, 4))
    worst = 0.0
    mismatches = []
    for (design, n), expected_row in EXPECTED_DEFF.items():
        for name, expected in zip(tables.STUDY_VARIABLES, expected_row):
            value = cells[(design, n, name)]
            worst = max(worst, abs(value - expected))
            if abs(value - expected) > 0.005 or tables.round_half_away(value) != expected:
                mismatches.append(f"{design}/{name}/n={n}: {value:.4f} vs {expected}")
    passed = not mismatches
    detail = f"30 cells, max |pre-rounding gap| = {worst:.4f}"
    if mismatches:
        detail += "; " + "; ".join(mismatches[:4])
    return CheckResult("design-effect table reproduction", passed, detail)


def check_entropy_closed_forms() -> CheckResult:
    worst = 0.0
    for N, n in ((4, 2), (6, 2), (6, 3), (12, 4)):
        pv = tables.equal_probability_vector(N, n)
        d_sys = inclusion.enumerate_design("sys", pv)
        d_ops = inclusion.enumerate_design("ops", pv)
        d_srs = inclusion.enumerate_design("srs", N=N, n=n)
        worst = max(
            worst,
            abs(analytics.entropy(d_srs) - analytics.entropy_closed_form("srs", N, n)),
            abs(analytics.entropy(d_sys) - analytics.entropy_closed_form("sys", N, n)),
            abs(analytics.entropy(d_ops) - analytics.entropy_closed_form("ops", N, n)),
            abs(
                analytics.kl_divergence(d_sys, d_srs)
                - math.fsum(math.log((N - k) / (n - k)) for k in range(1, n))
            ),
            abs(
                analytics.kl_divergence(d_ops, d_srs)
                - math.fsum(math.log((1 - k / N) / (1 - k / n)) for k in range(n))
            ),
            abs(analytics.kl_divergence(d_sys, d_ops) - (n - 1) * math.log(N / n)),
        )
    passed = worst < 1e-12
    return CheckResult(
        "entropy and divergence closed forms",
        passed,
        f"max |error| = {worst:.2e}",
    )


def check_deff_bounds(variable_count: int = 1000) -> CheckResult:
    N = 12
    gen = np.random.default_rng(VARIABLE_SEED)
    worst_excess = -math.inf
    attain_gap = math.inf
    for n in (2, 4):
        p = N // n
        bound_ops = analytics.dmax_closed_form("ops", N, n)
        bound_sys = analytics.dmax_closed_form("sys", N, n)
        ys = gen.normal(size=(variable_count, N)) * 10.0 + gen.uniform(-5, 5, size=(variable_count, 1))
        for y in ys:
            v_srs = analytics.variance_closed_form("srs", y, N, n)
            worst_excess = max(
                worst_excess,
                analytics.variance_closed_form("ops", y, N, n) / v_srs - bound_ops,
                analytics.variance_closed_form("sys", y, N, n) / v_srs - bound_sys,
            )
        # equal block means drive the pivotal ratio to its ceiling
        y_flat = np.tile(np.arange(p, dtype=float), n)
        ratio = analytics.variance_closed_form("ops", y_flat, N, n) / analytics.variance_closed_form(
            "srs", y_flat, N, n
        )
        attain_gap = min(attain_gap, abs(ratio - bound_ops))
    passed = worst_excess <= 1e-9 and attain_gap <= 1e-9
    return CheckResult(
        f"worst-case design-effect bounds ({variable_count} variables, n=2 and 4)",
        passed,
        f"max excess over bound = {worst_excess:.2e}, attainment gap = {attain_gap:.2e}",
    )


def check_eigen_dispersion() -> CheckResult:
    worst_value = 0.0
    ordering_ok = True
    for n in (2, 3, 4):
        for p in (2, 3, 4):
            N = n * p
            lam_bar = (p - 1) / p**2
            cases = {
                "srs": (analytics.srs_pikl(N, n), N * lam_bar / (N - 1)),
                "ops": (analytics.markov_pikl(N, n, 1.0), 1.0 / p),
                "sys": (analytics.markov_pikl(N, n, 0.0), n / p),
            }
            deltas = {}
            for kind, (pm, lam_plus) in cases.items():
                eigenvalues, delta = analytics.eigen_dispersion(analytics.delta_matrix(pm))
                deltas[kind] = delta
                near_zero = np.abs(eigenvalues) < 1e-10
                near_plus = np.abs(eigenvalues - lam_plus) < 1e-10
                if not (np.all(near_zero | near_plus) and near_zero.any() and near_plus.any()):
                    ordering_ok = False
                worst_value = max(
                    worst_value,
                    float(np.min(np.where(near_zero, np.abs(eigenvalues), np.abs(eigenvalues - lam_plus)))),
                )
            if not deltas["srs"] <= deltas["ops"] <= deltas["sys"]:
                ordering_ok = False
    passed = ordering_ok and worst_value < 1e-10
    return CheckResult(
        "two-point spectra and dispersion ordering (n,p in {2,3,4})",
        passed,
        f"max eigenvalue gap = {worst_value:.2e}, ordering {'holds' if ordering_ok else 'fails'}",
    )


def check_monte_carlo(replicates: int = 10**6, seed: int = 4) -> CheckResult:
    pv = cumulate(EIGHT_UNIT_PI)
    exact = inclusion.design_pikl(inclusion.enumerate_design("ops", pv)).values
    worst_sigma = 0.0
    ok = True
    for algorithm in ("ops", "dss"):
        est, _ = inclusion.monte_carlo_pikl(algorithm, pv, replicates, seed)
        se = np.sqrt(exact * (1.0 - exact) / replicates)
        diff = np.abs(est.values - exact)
        with np.errstate(invalid="ignore", divide="ignore"):
            sigmas = np.where(se > 0, diff / se, np.where(diff > 0, np.inf, 0.0))
        worst_sigma = max(worst_sigma, float(np.max(sigmas)))
        if np.any(diff > 3.0 * se + 1e-15):
            ok = False
        # determinism: a small rerun must reproduce itself exactly
        again, _ = inclusion.monte_carlo_pikl(algorithm, pv, 1000, seed)
        once, _ = inclusion.monte_carlo_pikl(algorithm, pv, 1000, seed)
        if not np.array_equal(again.values, once.values):
            ok = False
    return CheckResult(
        f"Monte Carlo joint frequencies (R={replicates})",
        ok,
        f"max |error| = {worst_sigma:.2f} standard errors",
    )


def check_extended_marginals(seed: int = 8) -> CheckResult:
    """First-order frequencies for the remaining samplers against their
    exact designs."""
    ok = True
    worst = 0.0

    def _sigmas(est_values, exact, R):
        se = np.sqrt(exact * (1.0 - exact) / R)
        diff = np.abs(est_values - exact)
        with np.errstate(invalid="ignore", divide="ignore"):
            sig = np.where(se > 0, diff / se, np.where(diff > 0, np.inf, 0.0))
        return float(np.max(sig))

    pv8 = cumulate(EIGHT_UNIT_PI)
    cases = [
        ("sys", pv8, 10**6, inclusion.design_pikl(inclusion.enumerate_design("sys", pv8)).values, None),
        ("srs", pv8, 10**6, analytics.srs_pikl(8, 4).values, None),
        (
            "cmc",
            tables.equal_probability_vector(12, 4),
            10**6,
            analytics.markov_pikl(12, 4, 0.5).values,
            0.5,
        ),
        (
            "rps",
            tables.equal_probability_vector(4, 2),
            2 * 10**5,
            inclusion.design_pikl(
                inclusion.enumerate_design("rps", tables.equal_probability_vector(4, 2))
            ).values,
            None,
        ),
    ]
    for algorithm, pv, R, exact, rho in cases:
        est, _ = inclusion.monte_carlo_pikl(algorithm, pv, R, seed, rho=rho)
        sig = _sigmas(est.values, exact, R)
        worst = max(worst, sig)
        if sig > 3.0:
            ok = False
    return CheckResult(
        "marginal and joint frequencies of the remaining samplers",
        ok,
        f"max |error| = {worst:.2f} standard errors",
    )


def fast_checks() -> list[CheckResult]:
    return [
        check_cluster_table(),
        check_design_equivalence(),
        check_pikl_closed_form(),
        check_transitions_and_marginals(),
        check_deff_table(),
        check_entropy_closed_forms(),
        check_deff_bounds(),
        check_eigen_dispersion(),
    ]


def full_checks() -> list[CheckResult]:
    return fast_checks() + [check_monte_carlo(), check_extended_marginals()]
