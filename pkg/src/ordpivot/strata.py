"""Cumulative-probability geometry for ordered unequal-probability sampling.

Units are labelled 1..N in a fixed order.  The running totals of the
inclusion probabilities cross each integer boundary 1..n-1 inside some
unit; those units straddle two adjacent selection intervals and drive
everything downstream: microstrata, clusters, joint inclusion
probabilities.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyCluster, InvalidProbability, NonIntegerSampleSize

# Cumulative sums within this distance of an integer are treated as exactly
# that integer, so zero exit masses are detected deterministically for
# decimal inputs.
INTEGER_SNAP = 1e-9


def snap_cumulative(masses) -> np.ndarray:
    """Cumulative sums of ``masses`` with 0 prepended and integers snapped.

    Works for any nonnegative mass vector summing to an integer, not just
    validated probability vectors; the samplers reuse it for cluster masses.
    """
    cum = np.concatenate(([0.0], np.cumsum(np.asarray(masses, dtype=float))))
    rounded = np.round(cum)
    near = np.abs(cum - rounded) <= INTEGER_SNAP
    cum[near] = rounded[near]
    return cum


def boundaries(cum: np.ndarray) -> tuple[list[int], list[float], list[float]]:
    """Locate the units straddling each interior integer of a cumulative array.

    ``cum`` has length N+1 with ``cum[0] == 0`` and ``cum[N] == n`` (already
    snapped).  For each integer i in 1..n-1 the crossing unit k satisfies
    ``cum[k-1] < i <= cum[k]``.  Returns 1-based crossing indices together
    with the entry masses ``a_i = i - cum[k-1]`` and exit masses
    ``b_i = cum[k] - i``.
    """
    total = int(round(cum[-1]))
    cross: list[int] = []
    a: list[float] = []
    b: list[float] = []
    k = 1
    for i in range(1, total):
        while not (cum[k - 1] < i <= cum[k]):
            k += 1
        cross.append(k)
        a.append(float(i - cum[k - 1]))
        b.append(float(cum[k] - i))
    return cross, a, b


@dataclass(frozen=True)
class ProbabilityVector:
    """Ordered first-order inclusion probabilities with their running totals.

    ``V`` has length N+1: ``V[0] = 0`` and ``V[k]`` is the total mass of
    units 1..k, snapped at integers.  ``n`` is the (integer) sample size.
    """

    pi: tuple[float, ...]
    V: tuple[float, ...]
    n: int

    @property
    def N(self) -> int:
        return len(self.pi)

    def cumulative(self) -> np.ndarray:
        return np.asarray(self.V, dtype=float)


def cumulate(pi) -> ProbabilityVector:
    """Validate a probability list and build its cumulative representation.

    Raises InvalidProbability unless every entry lies strictly in (0, 1),
    and NonIntegerSampleSize unless the total is within 1e-9 of a positive
    integer.
    """
    values = [float(p) for p in pi]
    if not values:
        raise InvalidProbability("empty probability vector")
    for k, p in enumerate(values, start=1):
        if not (0.0 < p < 1.0) or p != p:
            raise InvalidProbability(f"pi[{k}] = {p!r} is outside (0, 1)")
    cum = snap_cumulative(values)
    total = float(cum[-1])
    if abs(total - round(total)) > INTEGER_SNAP:
        raise NonIntegerSampleSize(
            f"probabilities sum to {total!r}, not an integer within {INTEGER_SNAP}"
        )
    n = int(round(total))
    if n < 1:
        raise NonIntegerSampleSize("probabilities sum to 0; need a sample size >= 1")
    return ProbabilityVector(pi=tuple(values), V=tuple(cum.tolist()), n=n)


@dataclass(frozen=True)
class StrataDecomposition:
    """Cross-border units, their entry/exit masses, and the microstrata.

    Microstratum i is the index range [k_{i-1}, k_i] clipped to 1..N (the
    previous cross-border unit stays listed as a member even when its exit
    mass is zero; ``phantom_flags`` marks those).
    """

    cross_border: tuple[int, ...]
    a: tuple[float, ...]
    b: tuple[float, ...]
    strata: tuple[tuple[int, ...], ...]
    phantom_flags: tuple[bool, ...]

    @property
    def n(self) -> int:
        return len(self.strata)


def decompose(pv: ProbabilityVector) -> StrataDecomposition:
    """Split the population into the n microstrata delimited by the
    cross-border units.

    With n = 1 there are no cross-border units and a single stratum holding
    every unit.
    """
    cum = pv.cumulative()
    cross, a, b = boundaries(cum)
    # stratum i spans k_{i-1}..k_i with the conventions k_0 = 0, k_n = N+1
    lo = [1] + cross
    hi = cross + [pv.N]
    strata = tuple(tuple(range(lo[i], hi[i] + 1)) for i in range(pv.n))
    phantom = tuple(x == 0.0 for x in b)
    return StrataDecomposition(
        cross_border=tuple(cross),
        a=tuple(a),
        b=tuple(b),
        strata=strata,
        phantom_flags=phantom,
    )


@dataclass(frozen=True)
class ClusterPopulation:
    """Alternation of non-cross-border runs and cross-border singletons.

    There are 2n-1 clusters labelled 1..2n-1: odd labels hold the (possibly
    empty) runs strictly between consecutive cross-border units, even labels
    hold the cross-border singletons.  ``psi`` carries one selection mass
    per cluster; the masses sum to n.
    """

    clusters: tuple[tuple[int, ...], ...]
    psi: tuple[float, ...]
    phantom_clusters: tuple[int, ...]

    @property
    def n(self) -> int:
        return (len(self.clusters) + 1) // 2

    def cumulative(self) -> np.ndarray:
        return snap_cumulative(self.psi)


def build_clusters(dec: StrataDecomposition, pv: ProbabilityVector) -> ClusterPopulation:
    """Group the population into the 2n-1 clusters induced by a decomposition.

    Odd cluster i holds the units strictly between cross-border units
    k_{i-1} and k_i with mass V_{k_i - 1} - V_{k_{i-1}}; even cluster i is
    the singleton {k_i} with mass pi_{k_i}.  An empty odd run is kept as a
    phantom cluster with mass 0 so labels stay aligned.
    """
    cum = pv.cumulative()
    cross = dec.cross_border
    lo = [0] + list(cross)          # k_{i-1}, with k_0 = 0
    hi = list(cross) + [pv.N + 1]   # k_i, with k_n = N+1
    clusters: list[tuple[int, ...]] = []
    psi: list[float] = []
    for i in range(dec.n):
        run = tuple(range(lo[i] + 1, hi[i]))
        clusters.append(run)
        psi.append(float(cum[hi[i] - 1] - cum[lo[i]]))
        if i < dec.n - 1:
            k = cross[i]
            clusters.append((k,))
            psi.append(float(pv.pi[k - 1]))
    phantom = tuple(j + 1 for j, members in enumerate(clusters) if not members)
    return ClusterPopulation(
        clusters=tuple(clusters), psi=tuple(psi), phantom_clusters=phantom
    )


def within_cluster_distribution(cluster, pv: ProbabilityVector) -> tuple[float, ...]:
    """Selection probabilities of a cluster's members, proportional to pi.

    Raises EmptyCluster for a phantom cluster.
    """
    members = tuple(cluster)
    if not members:
        raise EmptyCluster("phantom cluster has no members to select from")
    weights = [pv.pi[k - 1] for k in members]
    total = sum(weights)
    return tuple(w / total for w in weights)
