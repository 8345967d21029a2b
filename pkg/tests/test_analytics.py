import math

import numpy as np
import pytest

from ordpivot import (
    ConstantVariable,
    NonMultiple,
    SupportViolation,
    cumulate,
    deff,
    delta_matrix,
    design_pikl,
    dmax_closed_form,
    eigen_dispersion,
    entropy,
    entropy_closed_form,
    enumerate_design,
    ht_variance,
    jacobi_eigenvalues,
    kl_divergence,
    markov_pikl,
    srs_pikl,
    variance_closed_form,
)
from ordpivot.tables import (
    STUDY_VARIABLES,
    design_effect_cells,
    equal_probability_vector,
    round_half_away,
)


def direct_variance(design, pv, y):
    """Independent oracle: variance of the expansion estimator straight from
    the design's definition, sum_s q(s) (t_hat(s) - t_y)^2."""
    y = np.asarray(y, dtype=float)
    total = float(np.sum(y))
    acc = []
    for units, q in design.support:
        t_hat = sum(y[u - 1] / pv.pi[u - 1] for u in units)
        acc.append(q * (t_hat - total) ** 2)
    return math.fsum(acc)


class TestEntropy:
    def test_reference_designs(self):
        pv = cumulate([0.5] * 4)
        assert entropy(enumerate_design("sys", pv)) == pytest.approx(math.log(2), abs=1e-12)
        assert entropy(enumerate_design("ops", pv)) == pytest.approx(2 * math.log(2), abs=1e-12)
        assert entropy(enumerate_design("srs", N=4, n=2)) == pytest.approx(
            math.log(6), abs=1e-12
        )

    @pytest.mark.parametrize("N,n", [(4, 2), (6, 2), (6, 3), (12, 4)])
    def test_closed_forms_match_enumeration(self, N, n):
        pv = equal_probability_vector(N, n)
        assert entropy_closed_form("sys", N, n) == pytest.approx(
            entropy(enumerate_design("sys", pv)), abs=1e-12
        )
        assert entropy_closed_form("ops", N, n) == pytest.approx(
            entropy(enumerate_design("ops", pv)), abs=1e-12
        )
        assert entropy_closed_form("srs", N, n) == pytest.approx(
            entropy(enumerate_design("srs", N=N, n=n)), abs=1e-12
        )

    def test_closed_form_values(self):
        assert entropy_closed_form("srs", 12, 4) == pytest.approx(math.log(495), abs=1e-12)
        assert entropy_closed_form("ops", 12, 4) == pytest.approx(4 * math.log(3), abs=1e-12)
        assert entropy_closed_form("sys", 12, 4) == pytest.approx(math.log(3), abs=1e-12)

    def test_non_multiple_rejected(self):
        with pytest.raises(NonMultiple):
            entropy_closed_form("sys", 5, 2)


class TestKLDivergence:
    def test_nested_reference_designs(self):
        pv = cumulate([0.5] * 4)
        d_sys = enumerate_design("sys", pv)
        d_ops = enumerate_design("ops", pv)
        d_srs = enumerate_design("srs", N=4, n=2)
        assert kl_divergence(d_sys, d_ops) == pytest.approx(math.log(2), abs=1e-12)
        assert kl_divergence(d_sys, d_srs) == pytest.approx(math.log(3), abs=1e-12)
        assert kl_divergence(d_ops, d_ops) == 0.0

    def test_support_violation(self):
        pv = cumulate([0.5] * 4)
        with pytest.raises(SupportViolation):
            kl_divergence(enumerate_design("srs", N=4, n=2), enumerate_design("sys", pv))


class TestDeltaMatrix:
    def test_diagonal_and_row_sums(self, pv8, dec8):
        from ordpivot import pikl_matrix

        dm = delta_matrix(pikl_matrix(dec8, pv8))
        pi = np.asarray(pv8.pi)
        np.testing.assert_allclose(np.diag(dm), pi * (1 - pi), atol=1e-12)
        np.testing.assert_allclose(dm.sum(axis=1), 0.0, atol=1e-9)

    def test_kronecker_structure_equal_probabilities(self):
        n, p = 3, 4
        N = n * p
        block = (np.eye(p) - np.ones((p, p)) / p) / p
        np.testing.assert_allclose(
            delta_matrix(markov_pikl(N, n, 1.0)), np.kron(np.eye(n), block), atol=1e-12
        )
        np.testing.assert_allclose(
            delta_matrix(markov_pikl(N, n, 0.0)), np.kron(np.ones((n, n)), block), atol=1e-12
        )

    def test_positive_semidefinite(self, pv8, dec8):
        from ordpivot import pikl_matrix

        dm = delta_matrix(pikl_matrix(dec8, pv8))
        assert np.min(np.linalg.eigvalsh(dm)) >= -1e-10


class TestHTVariance:
    def test_zero_variance_cases(self, pv8, dec8):
        from ordpivot import pikl_matrix

        # fixed size makes the estimator exact when y is proportional to pi
        # (the zero row sums of the covariance matrix hit the constant
        # weighted vector y/pi); under equal probabilities that is any
        # constant variable
        dm = delta_matrix(pikl_matrix(dec8, pv8))
        assert ht_variance(dm, pv8, np.asarray(pv8.pi) * 7.0) == pytest.approx(0.0, abs=1e-9)
        pv_eq = equal_probability_vector(4, 2)
        dm_eq = delta_matrix(markov_pikl(4, 2, 1.0))
        assert ht_variance(dm_eq, pv_eq, [3.0] * 4) == pytest.approx(0.0, abs=1e-9)

    def test_matches_direct_definition(self, pv8, dec8):
        from ordpivot import pikl_matrix

        gen = np.random.default_rng(7)
        y = gen.uniform(0, 50, size=8)
        d = enumerate_design("ops", pv8)
        dm = delta_matrix(design_pikl(d))
        assert ht_variance(dm, pv8, y) == pytest.approx(
            direct_variance(d, pv8, y), rel=1e-9
        )

    def test_srs_closed_form(self):
        N, n = 6, 2
        pv = equal_probability_vector(N, n)
        gen = np.random.default_rng(11)
        y = gen.uniform(0, 10, size=N)
        dm = delta_matrix(srs_pikl(N, n))
        expected = N * N * (1 - n / N) / n * np.var(y, ddof=1)
        assert ht_variance(dm, pv, y) == pytest.approx(expected, rel=1e-9)
        assert variance_closed_form("srs", y, N, n) == pytest.approx(expected, rel=1e-9)

    def test_block_closed_form(self):
        N, n = 6, 2
        pv = equal_probability_vector(N, n)
        gen = np.random.default_rng(13)
        y = gen.uniform(0, 10, size=N)
        dm = delta_matrix(markov_pikl(N, n, 1.0))
        assert ht_variance(dm, pv, y) == pytest.approx(
            variance_closed_form("ops", y, N, n), rel=1e-9
        )
        dm0 = delta_matrix(markov_pikl(N, n, 0.0))
        assert ht_variance(dm0, pv, y) == pytest.approx(
            variance_closed_form("sys", y, N, n), rel=1e-9
        )


class TestVarianceClosedForm:
    def test_constant_variable(self):
        for kind in ("srs", "ops", "sys"):
            assert variance_closed_form(kind, [5.0] * 12, 12, 4) == pytest.approx(0.0, abs=1e-9)

    def test_published_cells(self):
        # two spot cells of the design-effect comparison
        y1 = STUDY_VARIABLES["y1"]
        y3 = STUDY_VARIABLES["y3"]
        v_srs = variance_closed_form("srs", y1, 12, 2)
        assert round_half_away(variance_closed_form("sys", y1, 12, 2) / v_srs) == 0.50
        v_srs3 = variance_closed_form("srs", y3, 12, 4)
        assert round_half_away(variance_closed_form("sys", y3, 12, 4) / v_srs3) == 5.44
        assert round_half_away(variance_closed_form("ops", y3, 12, 4) / v_srs3) == 1.36

    def test_non_multiple_rejected(self):
        with pytest.raises(NonMultiple):
            variance_closed_form("ops", list(range(5)), 5, 2)


class TestMarkovPikl:
    def test_limits(self):
        pv = cumulate([0.5] * 4)
        np.testing.assert_allclose(
            markov_pikl(4, 2, 1.0).values,
            design_pikl(enumerate_design("ops", pv)).values,
            atol=1e-12,
        )
        np.testing.assert_allclose(
            markov_pikl(4, 2, 0.0).values,
            design_pikl(enumerate_design("sys", pv)).values,
            atol=1e-12,
        )

    def test_intermediate_rho_against_enumeration(self):
        np.testing.assert_allclose(
            markov_pikl(4, 2, 0.5).values,
            design_pikl(enumerate_design("cmc", N=4, n=2, rho=0.5)).values,
            atol=1e-12,
        )
        np.testing.assert_allclose(
            markov_pikl(6, 3, 0.3).values,
            design_pikl(enumerate_design("cmc", N=6, n=3, rho=0.3)).values,
            atol=1e-12,
        )

    def test_known_entry(self):
        assert markov_pikl(4, 2, 0.5).values[0, 2] == pytest.approx(0.375, abs=1e-12)

    def test_non_multiple_rejected(self):
        with pytest.raises(NonMultiple):
            markov_pikl(5, 2, 0.5)


class TestDeff:
    def test_ratio_and_guard(self):
        assert deff(2.0, 4.0) == 0.5
        assert deff(3.0, 3.0) == 1.0
        with pytest.raises(ConstantVariable):
            deff(1.0, 0.0)

    def test_published_cells(self):
        cells = design_effect_cells((2, 4))
        assert round_half_away(cells[("CMC50", 2, "y1")]) == 0.43
        assert round_half_away(cells[("OPS", 4, "y2")]) == 0.95


class TestDmax:
    def test_closed_forms(self):
        assert dmax_closed_form("ops", 12, 2) == pytest.approx(1.1, abs=1e-12)
        assert dmax_closed_form("sys", 12, 2) == pytest.approx(2.2, abs=1e-12)

    def test_limit_in_population_size(self):
        values = [dmax_closed_form("ops", 2 * k, 2) for k in (10, 100, 1000)]
        assert values[0] > values[1] > values[2] > 1.0
        assert values[2] == pytest.approx(1.0, abs=1e-2)

    def test_non_multiple_rejected(self):
        with pytest.raises(NonMultiple):
            dmax_closed_form("ops", 5, 2)


class TestEigenDispersion:
    def test_jacobi_matches_lapack(self):
        gen = np.random.default_rng(3)
        for size in (2, 5, 9):
            m = gen.normal(size=(size, size))
            sym = (m + m.T) / 2
            np.testing.assert_allclose(
                jacobi_eigenvalues(sym), np.linalg.eigvalsh(sym), atol=1e-10
            )

    def test_block_design_spectrum(self):
        # N=12, n=4: eigenvalues {0 (x4), 1/3 (x8)} and dispersion 2/81
        eigenvalues, delta = eigen_dispersion(delta_matrix(markov_pikl(12, 4, 1.0)))
        np.testing.assert_allclose(eigenvalues[:4], 0.0, atol=1e-12)
        np.testing.assert_allclose(eigenvalues[4:], 1 / 3, atol=1e-12)
        assert delta == pytest.approx(2 / 81, abs=1e-12)

    def test_srs_spectrum(self):
        N, n = 12, 4
        eigenvalues, _ = eigen_dispersion(delta_matrix(srs_pikl(N, n)))
        lam_bar = np.mean(eigenvalues)
        assert eigenvalues[0] == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_allclose(eigenvalues[1:], N * lam_bar / (N - 1), atol=1e-10)

    def test_systematic_spectrum(self):
        n, p = 4, 3
        eigenvalues, _ = eigen_dispersion(delta_matrix(markov_pikl(n * p, n, 0.0)))
        positive = eigenvalues[eigenvalues > 1e-10]
        assert len(positive) == p - 1
        np.testing.assert_allclose(positive, n / p, atol=1e-10)

    def test_dispersion_ordering(self):
        for n in (2, 3, 4):
            for p in (2, 3, 4):
                N = n * p
                d_srs = eigen_dispersion(delta_matrix(srs_pikl(N, n)))[1]
                d_ops = eigen_dispersion(delta_matrix(markov_pikl(N, n, 1.0)))[1]
                d_sys = eigen_dispersion(delta_matrix(markov_pikl(N, n, 0.0)))[1]
                assert d_srs <= d_ops + 1e-14
                assert d_ops <= d_sys + 1e-14
