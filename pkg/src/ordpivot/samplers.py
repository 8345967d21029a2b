"""Sample-drawing algorithms.

All samplers are pure functions of (probabilities, random source): the same
seed yields the same sample.  The two headline algorithms are ordered
pivotal sampling (successive proportional duels along the list) and Deville
systematic sampling (one interval lookup per selection step with a patched
carry-over distribution); both respect the prescribed first-order inclusion
probabilities exactly and produce fixed-size samples.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonMultiple, PhantomSelected
from .strata import (
    ProbabilityVector,
    boundaries,
    build_clusters,
    decompose,
    snap_cumulative,
    within_cluster_distribution,
)


class RandomSource:
    """Seedable stream of uniforms and integer draws.

    Wraps a numpy Generator.  ``from_key`` derives independent streams from
    a base seed and an index tuple, so replicated runs parallelize
    deterministically.
    """

    def __init__(self, seed=None):
        self._gen = np.random.default_rng(seed)

    @classmethod
    def from_key(cls, seed: int, *key: int) -> "RandomSource":
        return cls(np.random.SeedSequence((int(seed),) + tuple(int(k) for k in key)))

    @property
    def generator(self) -> np.random.Generator:
        return self._gen

    def uniform(self, low: float = 0.0, high: float = 1.0) -> float:
        return float(self._gen.uniform(low, high))

    def bernoulli(self, p: float) -> bool:
        return bool(self._gen.random() < p)

    def integers(self, low: int, high: int) -> int:
        """Uniform integer in [low, high)."""
        return int(self._gen.integers(low, high))

    def permutation(self, n: int) -> np.ndarray:
        return self._gen.permutation(n)


@dataclass(frozen=True)
class Sample:
    """A fixed-size without-replacement sample: strictly increasing unit labels."""

    units: tuple[int, ...]

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.units, self.units[1:])):
            raise ValueError(f"sample units must be strictly increasing: {self.units}")

    def __len__(self) -> int:
        return len(self.units)


def _pivotal_winners(cum: np.ndarray, rng: RandomSource) -> list[int]:
    """Run the ordered pivotal duel chain over any snapped mass vector.

    Tolerates zero masses (phantom entries always lose) and a final mass of
    exactly 1, so it serves both unit-level probabilities and cluster-level
    masses.  Returns the winner labels in selection order.
    """
    m_count = len(cum) - 1
    if m_count == 1:
        return [1]
    winners: list[int] = []
    survivor = 1
    i = 1  # index of the next integer boundary to cross
    for t in range(2, m_count + 1):
        s = cum[t] - (i - 1)  # combined mass of survivor and challenger
        if s <= 0.0:
            continue  # both masses zero; nothing to decide
        pt = cum[t] - cum[t - 1]
        if cum[t] >= i:
            # boundary crossed: one unit is selected, the other carries the excess
            lam = (1.0 - pt) / (2.0 - s)
            if rng.uniform() < lam:
                winners.append(survivor)
                survivor = t
            else:
                winners.append(t)
            i += 1
        else:
            # plain duel: the survivor absorbs the combined mass
            if not rng.uniform() < (s - pt) / s:
                survivor = t
    return winners


def ordered_pivotal(pv: ProbabilityVector, rng: RandomSource) -> Sample:
    """Draw a sample by ordered pivotal sampling.

    Adjacent units duel with odds proportional to their current masses; the
    survivor carries the accumulated mass forward, and whenever the
    accumulation reaches 1 a unit is definitively selected while the excess
    jumps to the next duel.
    """
    winners = _pivotal_winners(pv.cumulative(), rng)
    return Sample(tuple(sorted(winners)))


def _systematic_steps(cum: np.ndarray, rng: RandomSource) -> list[int]:
    """Run Deville's selection steps over a snapped mass vector.

    One label per integer interval, located by an interval lookup of a
    per-step uniform; the uniform's law is tilted so a label straddling the
    previous boundary is never taken twice yet keeps its full marginal
    probability.
    """
    n = int(round(cum[-1]))
    cross, a, b = boundaries(cum)
    selected: list[int] = []
    prev_was_cross = False
    for i in range(1, n + 1):
        if i == 1:
            w = rng.uniform()
        else:
            a_prev, b_prev = a[i - 2], b[i - 2]
            if prev_was_cross:
                w = rng.uniform(b_prev, 1.0)
            elif b_prev > 0.0 and rng.bernoulli(
                a_prev * b_prev / ((1.0 - a_prev) * (1.0 - b_prev))
            ):
                w = rng.uniform(0.0, b_prev)
            else:
                w = rng.uniform()
        unit = int(np.searchsorted(cum, w + (i - 1), side="right"))
        selected.append(unit)
        prev_was_cross = i <= n - 1 and unit == cross[i - 1]
    return selected


def deville_systematic(pv: ProbabilityVector, rng: RandomSource) -> Sample:
    """Draw a sample by Deville's systematic procedure."""
    return Sample(tuple(sorted(_systematic_steps(pv.cumulative(), rng))))


def two_stage(pv: ProbabilityVector, cluster_algorithm: str, rng: RandomSource) -> Sample:
    """Draw by first sampling clusters, then one unit per selected cluster.

    ``cluster_algorithm`` is ``"ops"`` or ``"dss"``; the cluster stage runs
    that algorithm on the cluster masses, and the second stage picks a
    member of each selected cluster proportionally to its probability.  The
    composite induces the same design as the single-stage algorithm.
    """
    dec = decompose(pv)
    cp = build_clusters(dec, pv)
    cum_c = cp.cumulative()
    if cluster_algorithm == "ops":
        chosen = _pivotal_winners(cum_c, rng)
    elif cluster_algorithm == "dss":
        chosen = _systematic_steps(cum_c, rng)
    else:
        raise ValueError(f"unknown cluster algorithm {cluster_algorithm!r}")
    units: list[int] = []
    for label in chosen:
        members = cp.clusters[label - 1]
        if not members:
            raise PhantomSelected(f"cluster {label} has zero mass but was selected")
        if len(members) == 1:
            units.append(members[0])
            continue
        weights = within_cluster_distribution(members, pv)
        u = rng.uniform()
        acc = 0.0
        pick = members[-1]
        for member, w in zip(members, weights):
            acc += w
            if u < acc:
                pick = member
                break
        units.append(pick)
    return Sample(tuple(sorted(units)))


def ordered_systematic(pv: ProbabilityVector, rng: RandomSource) -> Sample:
    """Classical systematic sampling: one uniform start, n interval lookups."""
    cum = pv.cumulative()
    u = rng.uniform()
    units = [
        int(np.searchsorted(cum, u + j, side="right")) for j in range(pv.n)
    ]
    return Sample(tuple(sorted(units)))


def srs(N: int, n: int, rng: RandomSource) -> Sample:
    """Simple random sampling without replacement: all subsets equiprobable."""
    if not 1 <= n <= N:
        raise ValueError(f"need 1 <= n <= N, got n={n}, N={N}")
    units = rng.generator.choice(np.arange(1, N + 1), size=n, replace=False)
    return Sample(tuple(sorted(int(u) for u in units)))


def compromise_markov(N: int, n: int, rho: float, rng: RandomSource) -> Sample:
    """Equal-probability design interpolating systematic and pivotal sampling.

    The offset within each block of size p = N/n follows a chain that
    resamples uniformly with probability ``rho`` and stays put otherwise:
    rho = 0 is ordered systematic, rho = 1 is ordered pivotal.
    """
    if N % n != 0:
        raise NonMultiple(f"N={N} is not a multiple of n={n}")
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho}")
    p = N // n
    offset = rng.integers(1, p + 1)
    units = [offset]
    for i in range(1, n):
        if rng.bernoulli(rho):
            offset = rng.integers(1, p + 1)
        units.append(i * p + offset)
    return Sample(tuple(units))


def randomized_pivotal(pv: ProbabilityVector, rng: RandomSource) -> Sample:
    """Ordered pivotal sampling applied after a uniform random relabelling."""
    perm = rng.permutation(pv.N)  # perm[j] = original 0-based unit at position j+1
    cum = snap_cumulative([pv.pi[j] for j in perm])
    winners = _pivotal_winners(cum, rng)
    return Sample(tuple(sorted(int(perm[w - 1]) + 1 for w in winners)))
