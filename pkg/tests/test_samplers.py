import numpy as np
import pytest

from ordpivot import (
    NonMultiple,
    RandomSource,
    Sample,
    compromise_markov,
    cumulate,
    deville_systematic,
    ordered_pivotal,
    ordered_systematic,
    randomized_pivotal,
    srs,
    two_stage,
)
from ordpivot.verify import random_instances

ALL_DRAWS = [
    ("ops", lambda pv, rng: ordered_pivotal(pv, rng)),
    ("dss", lambda pv, rng: deville_systematic(pv, rng)),
    ("sys", lambda pv, rng: ordered_systematic(pv, rng)),
    ("rps", lambda pv, rng: randomized_pivotal(pv, rng)),
    ("two_stage_ops", lambda pv, rng: two_stage(pv, "ops", rng)),
    ("two_stage_dss", lambda pv, rng: two_stage(pv, "dss", rng)),
]


def test_sample_type_rejects_disorder():
    with pytest.raises(ValueError):
        Sample((3, 2))
    with pytest.raises(ValueError):
        Sample((1, 1, 2))


def test_random_source_reproducible():
    a = RandomSource.from_key(9, 1)
    b = RandomSource.from_key(9, 1)
    assert [a.uniform() for _ in range(5)] == [b.uniform() for _ in range(5)]
    # a different replicate index gives a different stream
    c = RandomSource.from_key(9, 2)
    assert a.uniform() != c.uniform()


@pytest.mark.parametrize("name,draw", ALL_DRAWS)
def test_fixed_size_and_reproducibility(name, draw, pv8):
    first = draw(pv8, RandomSource(2024))
    again = draw(pv8, RandomSource(2024))
    assert first == again
    assert len(first) == pv8.n
    assert all(1 <= u <= pv8.N for u in first.units)


@pytest.mark.parametrize("name,draw", ALL_DRAWS)
def test_fixed_size_on_random_instances(name, draw):
    rng = RandomSource(5)
    for pv in random_instances(10, seed=77, n_min=1):
        for _ in range(20):
            assert len(draw(pv, rng)) == pv.n


def _marginal_sigmas(draw, pv, replicates, seed):
    rng = RandomSource(seed)
    counts = np.zeros(pv.N)
    for _ in range(replicates):
        counts[np.asarray(draw(pv, rng).units) - 1] += 1
    freq = counts / replicates
    pi = np.asarray(pv.pi)
    se = np.sqrt(pi * (1 - pi) / replicates)
    return np.max(np.abs(freq - pi) / se)


@pytest.mark.parametrize(
    "name,draw,seed",
    [(n, d, s) for (n, d), s in zip(ALL_DRAWS, (11, 12, 13, 14, 15, 16))],
)
def test_marginals_match_declared_probabilities(name, draw, seed, pv8):
    # 4 standard errors at a fixed seed keeps this deterministic and tight
    assert _marginal_sigmas(draw, pv8, 50_000, seed) < 4.0


def test_ordered_pivotal_two_units():
    # single duel: the design is forced
    pv = cumulate((0.4, 0.6))
    rng = RandomSource(0)
    hits = sum(ordered_pivotal(pv, rng).units == (1,) for _ in range(50_000))
    assert hits / 50_000 == pytest.approx(0.4, abs=0.01)


def test_ordered_pivotal_equal_probabilities_stratified(pv8):
    # one unit from {1,2} and one from {3,4}, every pair equally likely
    pv = cumulate([0.5] * 4)
    rng = RandomSource(6)
    seen = {}
    for _ in range(40_000):
        s = ordered_pivotal(pv, rng).units
        seen[s] = seen.get(s, 0) + 1
    assert set(seen) == {(1, 3), (1, 4), (2, 3), (2, 4)}
    for count in seen.values():
        assert count / 40_000 == pytest.approx(0.25, abs=0.02)


def test_deville_systematic_never_repeats_a_unit(pv8):
    rng = RandomSource(8)
    for _ in range(20_000):
        units = deville_systematic(pv8, rng).units
        assert len(set(units)) == pv8.n


class _ForcedUniforms:
    """Stand-in random source replaying preset base uniforms."""

    def __init__(self, values, coin=False):
        self._values = list(values)
        self._coin = coin

    def uniform(self, low=0.0, high=1.0):
        return low + self._values.pop(0) * (high - low)

    def bernoulli(self, p):
        return self._coin


def test_deville_systematic_interval_lookup(pv8):
    # step 1 with w=0.5 lands in unit 2's interval [0.2, 0.7); the next
    # steps are pinned at the midpoints of their admissible ranges
    rng = _ForcedUniforms([0.5, 0.5, 0.5, 0.5])
    assert deville_systematic(pv8, rng).units == (2, 5, 6, 7)


def test_ordered_systematic_equal_probabilities():
    # equal probabilities: always an arithmetic progression with gap p
    pv = cumulate([0.25] * 12)
    rng = RandomSource(3)
    for _ in range(200):
        units = ordered_systematic(pv, rng).units
        assert np.all(np.diff(units) == 4)


def test_ordered_systematic_interval_lookup(pv8):
    # start at u=0.5: the four shifted points land in units 2, 5, 6, 7
    rng = _ForcedUniforms([0.5])
    assert ordered_systematic(pv8, rng).units == (2, 5, 6, 7)


def test_srs_uniform_pairs():
    rng = RandomSource(10)
    counts = {}
    for _ in range(60_000):
        s = srs(4, 2, rng).units
        counts[s] = counts.get(s, 0) + 1
    assert len(counts) == 6
    for c in counts.values():
        assert c / 60_000 == pytest.approx(1 / 6, abs=0.01)


def test_srs_census_and_validation():
    assert srs(5, 5, RandomSource(0)).units == (1, 2, 3, 4, 5)
    with pytest.raises(ValueError):
        srs(4, 5, RandomSource(0))
    with pytest.raises(ValueError):
        srs(4, 0, RandomSource(0))


class TestCompromiseMarkov:
    def test_rho_zero_is_systematic(self):
        rng = RandomSource(1)
        for _ in range(200):
            units = compromise_markov(12, 4, 0.0, rng).units
            assert np.all(np.diff(units) == 3)

    def test_rho_one_is_independent_blocks(self):
        rng = RandomSource(2)
        offsets = np.array(
            [np.mod(np.asarray(compromise_markov(12, 4, 1.0, rng).units) - 1, 3)
             for _ in range(20_000)]
        )
        # adjacent offsets uncorrelated at rho=1
        corr = np.corrcoef(offsets[:, 0], offsets[:, 1])[0, 1]
        assert abs(corr) < 0.05

    def test_pair_probability(self):
        rng = RandomSource(4)
        hits = sum(
            compromise_markov(4, 2, 0.5, rng).units == (1, 3) for _ in range(80_000)
        )
        assert hits / 80_000 == pytest.approx(0.375, abs=0.01)

    def test_requires_multiple(self):
        with pytest.raises(NonMultiple):
            compromise_markov(5, 2, 0.5, RandomSource(0))

    def test_rho_range(self):
        with pytest.raises(ValueError):
            compromise_markov(4, 2, 1.5, RandomSource(0))


def test_randomized_pivotal_reaches_within_block_pairs():
    # the fixed-order algorithm never pairs units of the same block;
    # random reordering must
    pv = cumulate([0.5] * 4)
    rng = RandomSource(9)
    seen = set()
    for _ in range(5000):
        seen.add(randomized_pivotal(pv, rng).units)
    assert seen == {(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)}


def test_two_stage_single_cluster_reduces_to_member_draw():
    pv = cumulate((0.4, 0.6))
    rng = RandomSource(21)
    hits = sum(two_stage(pv, "ops", rng).units == (2,) for _ in range(50_000))
    assert hits / 50_000 == pytest.approx(0.6, abs=0.01)
