"""Second-order inclusion probabilities and exact design enumeration.

Two independent routes to the same quantities live here on purpose.  The
closed-form route (`pikl_closed_form`, `transition_probabilities`,
`cluster_marginals`) evaluates product formulas; the enumeration route
walks every branch of a sampling algorithm and aggregates exact
probabilities.  The enumeration is the ground truth the closed forms are
tested against.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import DivisionByZeroGuard, NonMultiple, TooLarge
from .strata import (
    ClusterPopulation,
    ProbabilityVector,
    StrataDecomposition,
    boundaries,
    build_clusters,
    decompose,
    snap_cumulative,
    within_cluster_distribution,
)

# Hard ceiling on the estimated branch count of any exact enumeration.
MAX_BRANCHES = 10_000_000

# Randomized-pivotal enumeration averages over all orderings.
MAX_RPS_N = 8

_MC_CHUNK = 1 << 16


@dataclass(frozen=True)
class SamplingDesign:
    """Exact probability distribution over fixed-size samples.

    ``support`` lists (sample, probability) pairs sorted lexicographically
    by sample; probabilities are positive and sum to 1 within 1e-12.
    """

    support: tuple[tuple[tuple[int, ...], float], ...]
    N: int
    n: int

    def __post_init__(self):
        total = math.fsum(p for _, p in self.support)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"support probabilities sum to {total!r}, not 1")
        previous = None
        for units, p in self.support:
            if len(units) != self.n:
                raise ValueError(f"sample {units} does not have size {self.n}")
            if not (0.0 < p <= 1.0):
                raise ValueError(f"probability {p!r} outside (0, 1]")
            if previous is not None and units <= previous:
                raise ValueError("support must be sorted and duplicate-free")
            previous = units

    def as_dict(self) -> dict[tuple[int, ...], float]:
        return dict(self.support)


def design_from_paths(
    paths: Iterable[tuple[tuple[int, ...], float]], N: int, n: int
) -> SamplingDesign:
    """Aggregate (sample, probability) contributions into a design.

    Probabilities for identical samples are combined with compensated
    summation so enumeration noise stays near machine precision.
    """
    acc: dict[tuple[int, ...], list[float]] = {}
    for units, p in paths:
        if p <= 0.0:
            continue
        acc.setdefault(tuple(sorted(units)), []).append(p)
    support = tuple(
        (units, math.fsum(probs)) for units, probs in sorted(acc.items())
    )
    return SamplingDesign(support=support, N=N, n=n)


def total_variation(q: SamplingDesign, r: SamplingDesign) -> float:
    """Total-variation distance between two designs on the same population."""
    dq, dr = q.as_dict(), r.as_dict()
    samples = set(dq) | set(dr)
    return 0.5 * math.fsum(abs(dq.get(s, 0.0) - dr.get(s, 0.0)) for s in samples)


@dataclass(frozen=True)
class PiklMatrix:
    """Symmetric matrix of joint inclusion probabilities.

    Entry (k, l) holds the probability that units k and l are sampled
    together; the diagonal holds the first-order probabilities.
    """

    values: np.ndarray

    def __post_init__(self):
        v = self.values
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("matrix must be square")
        if not np.allclose(v, v.T, atol=1e-12):
            raise ValueError("matrix must be symmetric")

    @property
    def N(self) -> int:
        return self.values.shape[0]

    def first_order(self) -> np.ndarray:
        return np.diag(self.values).copy()

    def row_sum_error(self, n: int) -> float:
        """Largest violation of the fixed-size identity
        sum_{l != k} pikl = (n-1) * pik."""
        pik = self.first_order()
        off = self.values.sum(axis=1) - pik
        return float(np.max(np.abs(off - (n - 1) * pik)))


# ---------------------------------------------------------------------------
# closed forms


def _classify_units(dec: StrataDecomposition, N: int):
    """Label each unit as a true cross-border unit or a plain member of one
    microstratum.

    A boundary unit whose exit mass is zero is folded back into the
    stratum it closes, which keeps every later division by an exit mass
    well defined.  Returns (cross_index, stratum): cross_index[k] is the
    1-based boundary index for true cross-border units and 0 otherwise;
    stratum[k] is the home stratum of plain units.
    """
    cross_index = [0] * (N + 1)
    stratum = [0] * (N + 1)
    n = dec.n
    cross = dec.cross_border
    for m, k in enumerate(cross, start=1):
        if dec.b[m - 1] > 0.0:
            cross_index[k] = m
        else:
            stratum[k] = m
    lo = [1] + [k + 1 for k in cross]
    hi = [k - 1 for k in cross] + [N]
    for i in range(1, n + 1):
        for k in range(lo[i - 1], hi[i - 1] + 1):
            stratum[k] = i
    return cross_index, stratum


def pikl_closed_form(
    dec: StrataDecomposition, pv: ProbabilityVector, k: int, l: int
) -> float:
    """Joint inclusion probability of two distinct units, by case analysis.

    Plain units sharing a microstratum can never be sampled together; all
    other pairs attenuate the independent product pik*pil by a carry-over
    factor built from the product of the per-boundary ratios
    a_i b_i / ((1-a_i)(1-b_i)).
    """
    if k == l:
        raise ValueError("second-order probability needs two distinct units")
    if k > l:
        k, l = l, k
    cross_index, stratum = _classify_units(dec, pv.N)
    a, b = dec.a, dec.b

    def c_prod(i: int, j: int) -> float:
        out = 1.0
        for m in range(i, j):  # boundary indices i..j-1, 1-based
            out *= a[m - 1] * b[m - 1] / ((1.0 - a[m - 1]) * (1.0 - b[m - 1]))
        return out

    pik, pil = pv.pi[k - 1], pv.pi[l - 1]
    k_cross, l_cross = cross_index[k], cross_index[l]

    if not k_cross and not l_cross:
        i, j = stratum[k], stratum[l]
        if i == j:
            return 0.0
        return pik * pil * (1.0 - c_prod(i, j))

    if k_cross and not l_cross:
        i, j = k_cross + 1, stratum[l]
        b_in = b[k_cross - 1]  # entry mass carried past unit k's boundary
        return pik * pil * (
            1.0 - b_in * (1.0 - pik) / (pik * (1.0 - b_in)) * c_prod(i, j)
        )

    if not k_cross and l_cross:
        i, j = stratum[k], l_cross + 1
        b_out = b[l_cross - 1]
        if b_out <= 0.0:
            raise DivisionByZeroGuard(
                f"unit {l} classified cross-border with zero exit mass"
            )
        return pik * pil * (
            1.0 - (1.0 - pil) * (1.0 - b_out) / (pil * b_out) * c_prod(i, j)
        )

    i, j = k_cross + 1, l_cross + 1
    b_in, b_out = b[k_cross - 1], b[l_cross - 1]
    if b_out <= 0.0:
        raise DivisionByZeroGuard(
            f"unit {l} classified cross-border with zero exit mass"
        )
    ratio = (
        b_in
        * (1.0 - b_out)
        * (1.0 - pik)
        * (1.0 - pil)
        / (pik * pil * b_out * (1.0 - b_in))
    )
    return pik * pil * (1.0 - ratio * c_prod(i, j))


def pikl_matrix(dec: StrataDecomposition, pv: ProbabilityVector) -> PiklMatrix:
    """Full matrix of joint inclusion probabilities from the closed form."""
    N = pv.N
    values = np.diag(np.asarray(pv.pi, dtype=float))
    for k in range(1, N + 1):
        for l in range(k + 1, N + 1):
            p = pikl_closed_form(dec, pv, k, l)
            values[k - 1, l - 1] = p
            values[l - 1, k - 1] = p
    return PiklMatrix(values)


# ---------------------------------------------------------------------------
# cluster-level closed forms


def _cluster_ab(cp: ClusterPopulation) -> tuple[list[float], list[float]]:
    """Entry/exit masses of the cluster population's own boundaries.

    These coincide with the unit-level masses: the even clusters are
    exactly the units straddling the integer boundaries.
    """
    cross, a, b = boundaries(cp.cumulative())
    expected = [2 * i for i in range(1, cp.n)]
    if cross != expected:
        raise AssertionError(f"cluster boundaries {cross} != even labels {expected}")
    return a, b


class ClusterMarginals(NamedTuple):
    winner: float
    jumper: float
    selected: float


def transition_probabilities(
    cp: ClusterPopulation, i: int, previous_state: int
) -> dict[int, float]:
    """One-step law of the cluster selected at step i+1 given step i.

    ``previous_state`` is the cluster label selected at step i; it must be
    one of the three labels a step-i selection can produce.  The returned
    distribution covers the labels reachable at step i+1 and sums to 1.
    The jumper-mass convention past the last boundary is a_n = 0.
    """
    n = cp.n
    if not 1 <= i <= n - 1:
        raise ValueError(f"step index must satisfy 1 <= i <= {n - 1}, got {i}")
    feasible = {2 * i - 2, 2 * i - 1, 2 * i}
    if previous_state not in feasible or previous_state < 1:
        raise ValueError(
            f"state u_{previous_state} is not a feasible step-{i} outcome"
        )
    a, b = _cluster_ab(cp)
    a_i, b_i = a[i - 1], b[i - 1]
    a_next = a[i] if i + 1 <= n - 1 else 0.0
    last_label = 2 * n - 1
    dist: dict[int, float] = {}
    if previous_state == 2 * i:
        dist[2 * i + 1] = (1.0 - b_i - a_next) / (1.0 - b_i)
        if 2 * i + 2 <= last_label:
            dist[2 * i + 2] = a_next / (1.0 - b_i)
    else:
        dist[2 * i] = b_i / (1.0 - a_i)
        shared = (1.0 - a_i - b_i) / ((1.0 - a_i) * (1.0 - b_i))
        dist[2 * i + 1] = (1.0 - b_i - a_next) * shared
        if 2 * i + 2 <= last_label:
            dist[2 * i + 2] = a_next * shared
    return dist


def cluster_marginals(cp: ClusterPopulation, i: int) -> ClusterMarginals:
    """Closed-form probabilities that the run cluster of stratum i is the
    stratum winner, the outgoing jumper, or the i-th sampled cluster.

    Conventions: b_0 = 0 and a_n = b_n = 0.  The jumper probability is
    meaningful for i <= n-1 only; past the last boundary nothing jumps and
    the closed form degenerates to 0.
    """
    n = cp.n
    if not 1 <= i <= n:
        raise ValueError(f"stratum index must satisfy 1 <= i <= {n}, got {i}")
    a, b = _cluster_ab(cp)
    a_i = a[i - 1] if i <= n - 1 else 0.0
    b_i = b[i - 1] if i <= n - 1 else 0.0
    b_prev = b[i - 2] if i >= 2 else 0.0
    winner = (1.0 - a_i - b_prev) * (1.0 - a_i - b_i) / ((1.0 - a_i) * (1.0 - b_i))
    jumper = a_i * (1.0 - a_i - b_prev) / ((1.0 - a_i) * (1.0 - b_i))
    selected = 1.0 - a_i - b_prev
    return ClusterMarginals(winner=winner, jumper=jumper, selected=selected)


# ---------------------------------------------------------------------------
# exact enumeration


def pivotal_paths(masses) -> list[tuple[tuple[int, ...], tuple[int, ...], float]]:
    """Every outcome of the ordered pivotal duel tree on a mass vector.

    Returns (winners, jumpers, probability) triples, winners and jumpers
    in boundary order.  Zero-probability branches are pruned, so the
    support is exact.  Tolerates zero masses and a final mass of 1.
    """
    cum = snap_cumulative(masses)
    M = len(cum) - 1
    if M == 1:
        return [((1,), (), 1.0)]
    leaves: list[tuple[tuple[int, ...], tuple[int, ...], float]] = []
    # stack entries: (next unit t, survivor label, boundary index, prob, winners, jumpers)
    stack = [(2, 1, 1, 1.0, (), ())]
    while stack:
        t, survivor, i, prob, winners, jumpers = stack.pop()
        if t > M:
            leaves.append((winners, jumpers, prob))
            continue
        s = cum[t] - (i - 1)
        if s <= 0.0:
            stack.append((t + 1, survivor, i, prob, winners, jumpers))
            continue
        pt = cum[t] - cum[t - 1]
        if cum[t] >= i:
            lam = (1.0 - pt) / (2.0 - s)
            if lam > 0.0:
                stack.append(
                    (t + 1, t, i + 1, prob * lam, winners + (survivor,), jumpers + (t,))
                )
            if lam < 1.0:
                stack.append(
                    (
                        t + 1,
                        survivor,
                        i + 1,
                        prob * (1.0 - lam),
                        winners + (t,),
                        jumpers + (survivor,),
                    )
                )
        else:
            lam = (s - pt) / s
            if lam > 0.0:
                stack.append((t + 1, survivor, i, prob * lam, winners, jumpers))
            if lam < 1.0:
                stack.append((t + 1, t, i, prob * (1.0 - lam), winners, jumpers))
    return leaves


def systematic_paths(masses) -> list[tuple[tuple[int, ...], float]]:
    """Every selection path of Deville's systematic procedure on a mass
    vector, with exact probabilities.

    Probabilities come from integrating each step's uniform over the
    selection window of each label, chained through the carry-over rule;
    nothing here reuses the closed-form transition table, so the result
    can test it.
    """
    cum = snap_cumulative(masses)
    n = int(round(cum[-1]))
    M = len(cum) - 1
    cross, a, b = boundaries(cum)

    def step_distribution(i: int, prev_was_cross: bool) -> list[tuple[int, float]]:
        lo_unit = cross[i - 2] if i >= 2 else 1
        hi_unit = cross[i - 1] if i <= n - 1 else M
        if i == 1:
            b_prev, weight = 0.0, 0.0
        else:
            a_prev, b_prev = a[i - 2], b[i - 2]
            weight = (
                a_prev * b_prev / ((1.0 - a_prev) * (1.0 - b_prev))
                if b_prev > 0.0
                else 0.0
            )
        out = []
        for k in range(lo_unit, hi_unit + 1):
            lo = max(cum[k - 1] - (i - 1), 0.0)
            hi = min(cum[k] - (i - 1), 1.0)
            if hi <= lo:
                continue
            if i >= 2 and prev_was_cross:
                p = max(0.0, hi - max(lo, b_prev)) / (1.0 - b_prev)
            elif weight > 0.0:
                low_part = max(0.0, min(hi, b_prev) - lo) / b_prev
                p = weight * low_part + (1.0 - weight) * (hi - lo)
            else:
                p = hi - lo
            if p > 0.0:
                out.append((k, p))
        return out

    paths: list[tuple[tuple[int, ...], float]] = []
    stack: list[tuple[int, bool, float, tuple[int, ...]]] = [(1, False, 1.0, ())]
    while stack:
        i, prev_was_cross, prob, chosen = stack.pop()
        if i > n:
            paths.append((chosen, prob))
            continue
        for unit, p in step_distribution(i, prev_was_cross):
            nxt = i <= n - 1 and unit == cross[i - 1]
            stack.append((i + 1, nxt, prob * p, chosen + (unit,)))
    return paths


def _ordered_systematic_support(cum: np.ndarray, n: int):
    cuts = sorted({float(v % 1.0) for v in cum if 0.0 < v % 1.0 < 1.0})
    edges = [0.0] + cuts + [1.0]
    for lo, hi in zip(edges, edges[1:]):
        u = 0.5 * (lo + hi)
        units = tuple(
            int(np.searchsorted(cum, u + j, side="right")) for j in range(n)
        )
        yield units, hi - lo


def _markov_row(p: int, rho: float, r: int) -> list[tuple[int, float]]:
    out = []
    for s in range(1, p + 1):
        pr = rho / p + (1.0 - rho if s == r else 0.0)
        if pr > 0.0:
            out.append((s, pr))
    return out


def _guard(estimate: float, what: str):
    if estimate > MAX_BRANCHES:
        raise TooLarge(f"{what}: estimated {estimate:.3g} branches exceeds {MAX_BRANCHES}")


def _stratum_sizes(pv: ProbabilityVector) -> list[int]:
    cross, _, _ = boundaries(pv.cumulative())
    lo = [1] + cross
    hi = cross + [pv.N]
    return [h - l + 1 for l, h in zip(lo, hi)]


def enumerate_design(
    algorithm: str,
    pv: ProbabilityVector | None = None,
    *,
    N: int | None = None,
    n: int | None = None,
    rho: float | None = None,
) -> SamplingDesign:
    """Exact sampling design of an algorithm, by exhaustive branch traversal.

    ``ops``, ``dss``, ``sys`` and ``rps`` need a probability vector; ``srs``
    and ``cmc`` need (N, n), with ``rho`` for ``cmc``.  Raises TooLarge when
    the estimated branch count exceeds the feasibility guard.
    """
    if algorithm in ("ops", "dss", "sys", "rps"):
        if pv is None:
            raise ValueError(f"{algorithm} enumeration needs a probability vector")
        N, n = pv.N, pv.n

    if algorithm == "ops":
        _guard(2.0 ** (N - 1), "ordered pivotal enumeration")
        paths = [(w, p) for w, _, p in pivotal_paths(pv.pi)]
        return design_from_paths(paths, N, n)

    if algorithm == "dss":
        _guard(math.prod(_stratum_sizes(pv)), "systematic-steps enumeration")
        return design_from_paths(systematic_paths(pv.pi), N, n)

    if algorithm == "sys":
        return design_from_paths(
            _ordered_systematic_support(pv.cumulative(), n), N, n
        )

    if algorithm == "rps":
        if N > MAX_RPS_N:
            raise TooLarge(
                f"randomized-order enumeration limited to N <= {MAX_RPS_N}, got {N}"
            )
        scale = 1.0 / math.factorial(N)
        paths = []
        for perm in itertools.permutations(range(N)):
            for winners, _, p in pivotal_paths([pv.pi[j] for j in perm]):
                original = tuple(sorted(perm[w - 1] + 1 for w in winners))
                paths.append((original, p * scale))
        return design_from_paths(paths, N, n)

    if algorithm == "srs":
        if N is None or n is None:
            raise ValueError("srs enumeration needs N and n")
        _guard(math.comb(N, n), "simple random sampling enumeration")
        q = 1.0 / math.comb(N, n)
        paths = ((combo, q) for combo in itertools.combinations(range(1, N + 1), n))
        return design_from_paths(paths, N, n)

    if algorithm == "cmc":
        if N is None or n is None or rho is None:
            raise ValueError("cmc enumeration needs N, n, and rho")
        if N % n != 0:
            raise TooLarge(f"N={N} is not a multiple of n={n}")
        p = N // n
        _guard(float(p) ** n, "compromise chain enumeration")
        paths = []
        stack = [(1, r, 1.0 / p, (r,)) for r in range(1, p + 1)]
        while stack:
            i, r, prob, offsets = stack.pop()
            if i == n:
                units = tuple(j * p + off for j, off in enumerate(offsets))
                paths.append((units, prob))
                continue
            for s, pr in _markov_row(p, rho, r):
                stack.append((i + 1, s, prob * pr, offsets + (s,)))
        return design_from_paths(paths, N, n)

    raise ValueError(f"unknown algorithm {algorithm!r}")


def enumerate_two_stage(pv: ProbabilityVector, cluster_algorithm: str) -> SamplingDesign:
    """Exact design of the cluster-then-member composition."""
    dec = decompose(pv)
    cp = build_clusters(dec, pv)
    if cluster_algorithm == "ops":
        cluster_paths = [(w, p) for w, _, p in pivotal_paths(cp.psi)]
    elif cluster_algorithm == "dss":
        cluster_paths = systematic_paths(cp.psi)
    else:
        raise ValueError(f"unknown cluster algorithm {cluster_algorithm!r}")
    _guard(
        len(cluster_paths) * math.prod(max(len(c), 1) for c in cp.clusters),
        "two-stage enumeration",
    )
    paths: list[tuple[tuple[int, ...], float]] = []
    for labels, q in cluster_paths:
        choices = []
        for label in labels:
            members = cp.clusters[label - 1]
            if not members:
                raise AssertionError(f"phantom cluster {label} enumerated with mass")
            weights = within_cluster_distribution(members, pv)
            choices.append(list(zip(members, weights)))
        for combo in itertools.product(*choices):
            units = tuple(sorted(m for m, _ in combo))
            weight = math.prod(w for _, w in combo)
            paths.append((units, q * weight))
    return design_from_paths(paths, pv.N, pv.n)


def design_pikl(d: SamplingDesign) -> PiklMatrix:
    """Joint inclusion probabilities read off an explicit design."""
    values = np.zeros((d.N, d.N))
    for units, q in d.support:
        idx = np.asarray(units) - 1
        values[np.ix_(idx, idx)] += q
    return PiklMatrix(values)


# ---------------------------------------------------------------------------
# Monte Carlo estimation


def _batch_ops(cum: np.ndarray, R: int, gen: np.random.Generator) -> np.ndarray:
    """Membership indicators for R ordered pivotal draws.

    The duel masses are identical across replicates (the survivor always
    absorbs the combined mass), so each duel is one vectorized Bernoulli.
    """
    M = len(cum) - 1
    Z = np.zeros((R, M), dtype=bool)
    if M == 1:
        Z[:, 0] = True
        return Z
    survivor = np.ones(R, dtype=np.int64)
    i = 1
    for t in range(2, M + 1):
        s = cum[t] - (i - 1)
        if s <= 0.0:
            continue
        pt = cum[t] - cum[t - 1]
        u = gen.random(R)
        if cum[t] >= i:
            keep = u < (1.0 - pt) / (2.0 - s)
            winner = np.where(keep, survivor, t)
            Z[np.arange(R), winner - 1] = True
            survivor = np.where(keep, t, survivor)
            i += 1
        else:
            switch = u >= (s - pt) / s
            survivor[switch] = t
    return Z


def _batch_dss(cum: np.ndarray, R: int, gen: np.random.Generator) -> np.ndarray:
    """Membership indicators for R systematic-steps draws."""
    M = len(cum) - 1
    n = int(round(cum[-1]))
    cross, a, b = boundaries(cum)
    Z = np.zeros((R, M), dtype=bool)
    prev = np.zeros(R, dtype=bool)
    for i in range(1, n + 1):
        r2 = gen.random(R)
        if i == 1:
            w = r2
        else:
            a_prev, b_prev = a[i - 2], b[i - 2]
            w = r2.copy()
            if b_prev > 0.0:
                weight = a_prev * b_prev / ((1.0 - a_prev) * (1.0 - b_prev))
                narrow = ~prev & (gen.random(R) < weight)
                w[narrow] = b_prev * r2[narrow]
                w[prev] = b_prev + (1.0 - b_prev) * r2[prev]
        sel = np.searchsorted(cum, w + (i - 1), side="right")
        Z[np.arange(R), sel - 1] = True
        prev = sel == cross[i - 1] if i <= n - 1 else np.zeros(R, dtype=bool)
    return Z


def _batch_sys(cum: np.ndarray, n: int, R: int, gen: np.random.Generator) -> np.ndarray:
    M = len(cum) - 1
    Z = np.zeros((R, M), dtype=bool)
    u = gen.random(R)
    for j in range(n):
        sel = np.searchsorted(cum, u + j, side="right")
        Z[np.arange(R), sel - 1] = True
    return Z


def _batch_srs(N: int, n: int, R: int, gen: np.random.Generator) -> np.ndarray:
    keys = gen.random((R, N))
    idx = np.argpartition(keys, n - 1, axis=1)[:, :n]
    Z = np.zeros((R, N), dtype=bool)
    np.put_along_axis(Z, idx, True, axis=1)
    return Z


def _batch_cmc(N: int, n: int, rho: float, R: int, gen: np.random.Generator) -> np.ndarray:
    if N % n != 0:
        raise NonMultiple(f"N={N} is not a multiple of n={n}")
    p = N // n
    Z = np.zeros((R, N), dtype=bool)
    offset = gen.integers(1, p + 1, size=R)
    Z[np.arange(R), offset - 1] = True
    for i in range(1, n):
        move = gen.random(R) < rho
        fresh = gen.integers(1, p + 1, size=R)
        offset = np.where(move, fresh, offset)
        Z[np.arange(R), i * p + offset - 1] = True
    return Z


def _batch_rps(pv: ProbabilityVector, R: int, gen: np.random.Generator) -> np.ndarray:
    """Randomized-order pivotal draws; the duel masses differ per ordering,
    so this one loops."""
    from .samplers import RandomSource, randomized_pivotal

    Z = np.zeros((R, pv.N), dtype=bool)
    rng = RandomSource(gen)  # default_rng passes a Generator through unchanged
    for r in range(R):
        units = np.asarray(randomized_pivotal(pv, rng).units) - 1
        Z[r, units] = True
    return Z


def monte_carlo_pikl(
    algorithm: str,
    pv: ProbabilityVector,
    replicates: int,
    seed: int,
    *,
    rho: float | None = None,
) -> tuple[PiklMatrix, np.ndarray]:
    """Empirical joint inclusion frequencies with binomial standard errors.

    Replicates run in fixed-size batches with seeds derived from
    (seed, batch index), so the estimate is deterministic for a given seed
    and batches could run in parallel.  Returns (estimate, se) where
    se[k, l] = sqrt(p*(1-p)/R) at the estimated p.
    """
    if replicates < 1:
        raise ValueError("need at least one replicate")
    N, n = pv.N, pv.n
    cum = pv.cumulative()
    counts = np.zeros((N, N))
    done = 0
    batch_index = 0
    while done < replicates:
        size = min(_MC_CHUNK, replicates - done)
        gen = np.random.default_rng(np.random.SeedSequence((seed, batch_index)))
        if algorithm == "ops":
            Z = _batch_ops(cum, size, gen)
        elif algorithm == "dss":
            Z = _batch_dss(cum, size, gen)
        elif algorithm == "sys":
            Z = _batch_sys(cum, n, size, gen)
        elif algorithm == "srs":
            Z = _batch_srs(N, n, size, gen)
        elif algorithm == "cmc":
            if rho is None:
                raise ValueError("cmc needs rho")
            Z = _batch_cmc(N, n, rho, size, gen)
        elif algorithm == "rps":
            Z = _batch_rps(pv, size, gen)
        else:
            raise ValueError(f"unknown algorithm {algorithm!r}")
        Zf = Z.astype(np.float64)
        counts += Zf.T @ Zf
        done += size
        batch_index += 1
    est = counts / replicates
    se = np.sqrt(est * (1.0 - est) / replicates)
    return PiklMatrix(est), se
