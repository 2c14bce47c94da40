import math

import numpy as np
import pytest

from lextremes import (
    LValue,
    SigmaPoint,
    approx_error_census,
    digamma,
    dirichlet_poly,
    euler_product_truncated,
    hurwitz_zeta,
    l_value,
    l_value_batch,
    mangoldt,
    prime_sum,
    sieve_primes,
)
from lextremes.lfunc import hurwitz_zeta_error

from conftest import series_l1_oracle, zeta_via_eta

EULER_GAMMA = 0.5772156649015329


class TestDigamma:
    def test_at_one(self):
        assert digamma(1.0) == pytest.approx(-EULER_GAMMA, abs=1e-13)

    def test_at_half_via_duplication(self):
        # psi(1) = psi(2x) at x=1/2 gives psi(1/2) = 2 psi(1) - psi(1) ... use
        # the classical closed form directly: psi(1/2) = -gamma - 2 log 2
        assert digamma(0.5) == pytest.approx(-EULER_GAMMA - 2 * math.log(2), abs=1e-13)
        # duplication: psi(2x) = (psi(x) + psi(x + 1/2))/2 + log 2
        for x in (0.3, 0.9, 1.7):
            lhs = digamma(2 * x)
            rhs = 0.5 * (digamma(x) + digamma(x + 0.5)) + math.log(2)
            assert lhs == pytest.approx(rhs, abs=1e-12)

    def test_recurrence(self):
        assert digamma(2.0) == pytest.approx(1 - EULER_GAMMA, abs=1e-13)
        for x in (0.001, 0.25, 3.7, 42.0):
            assert digamma(x + 1) == pytest.approx(digamma(x) + 1 / x, abs=1e-12)

    def test_against_scipy(self):
        from scipy.special import digamma as scipy_digamma

        for x in np.geomspace(1e-4, 1e4, 60):
            assert digamma(float(x)) == pytest.approx(float(scipy_digamma(x)), abs=1e-12, rel=1e-12)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            digamma(0.0)
        with pytest.raises(ValueError):
            digamma(-1.5)


class TestHurwitzZeta:
    def test_pi_squared_over_two(self):
        assert hurwitz_zeta(2.0, 0.5) == pytest.approx(math.pi**2 / 2, abs=1e-12)

    def test_direct_series_bracket(self):
        # partial sums increase to the value; the integral tail brackets it
        m = 10**6
        partial = float(np.sum((np.arange(m) + 0.5) ** -2.0))
        value = hurwitz_zeta(2.0, 0.5)
        assert partial < value < partial + 1 / (m - 1)

    def test_zeta_three_quarters(self):
        assert hurwitz_zeta(0.75, 1.0) == pytest.approx(zeta_via_eta(0.75), abs=1e-12)

    @pytest.mark.parametrize("sigma", [0.6, 0.75, 0.9])
    def test_eta_series_oracle_at_one(self, sigma):
        assert hurwitz_zeta(sigma, 1.0) == pytest.approx(zeta_via_eta(sigma), abs=1e-10)

    def test_against_mpmath_grid(self):
        mpmath = pytest.importorskip("mpmath")
        mpmath.mp.dps = 30
        for sigma in (0.51, 0.6, 0.75, 0.9, 0.99, 2.0):
            for x in (0.01, 0.3, 1.0):
                expected = float(mpmath.zeta(sigma, x))
                assert hurwitz_zeta(sigma, x) == pytest.approx(expected, abs=1e-12, rel=1e-12)

    def test_error_bound_is_tiny(self):
        for sigma in (0.51, 0.6, 0.75, 0.99):
            assert hurwitz_zeta_error(sigma) < 1e-12

    def test_rejections(self):
        with pytest.raises(ValueError):
            hurwitz_zeta(1.0, 0.5)  # pole
        with pytest.raises(ValueError):
            hurwitz_zeta(0.75, 0.0)
        with pytest.raises(ValueError):
            hurwitz_zeta(0.75, 1.5)
        with pytest.raises(ValueError):
            hurwitz_zeta(0.4, 0.5)


class TestLValue:
    def test_mod3_closed_form(self, chi_mod3):
        result = l_value(chi_mod3, 1.0)
        assert result.method == "digamma"
        assert abs(result.value - math.pi / (3 * math.sqrt(3))) < 1e-10

    def test_mod4_closed_form(self, chi_mod4):
        result = l_value(chi_mod4, 1.0)
        assert abs(result.value - math.pi / 4) < 1e-10

    def test_mod4_against_leibniz_oracle(self, chi_mod4):
        # averaged partial sums of 1 - 1/3 + 1/5 - ... kill the O(1/K) term
        k = np.arange(2 * 10**6)
        terms = (-1.0) ** k / (2 * k + 1)
        partials = np.cumsum(terms)
        oracle = 0.5 * (partials[-1] + partials[-2])
        assert abs(oracle - math.pi / 4) < 1e-12
        assert abs(complex(l_value(chi_mod4, 1.0).value) - oracle) < 1e-10

    def test_principal_pole_rejected(self, group_of):
        with pytest.raises(ValueError):
            l_value(group_of(7).character(0), 1.0)

    def test_sigma_half_rejected(self, group_of):
        with pytest.raises(ValueError):
            l_value(group_of(7).character(1), 0.5)

    def test_accepts_sigma_point(self, group_of):
        chi = group_of(7).character(1)
        assert l_value(chi, SigmaPoint(0.75)).value == l_value(chi, 0.75).value

    def test_err_estimate_fields(self, group_of):
        result = l_value(group_of(7).character(1), 0.75)
        assert result.method == "hurwitz"
        assert 0 <= result.err_estimate < 1e-9

    def test_lvalue_validation(self):
        with pytest.raises(ValueError):
            LValue(1, 0.75, 1 + 0j, "digamma", 0.0)  # digamma only at sigma=1
        with pytest.raises(ValueError):
            LValue(1, 1.0, 1 + 0j, "digamma", -1.0)


class TestBatchEvaluation:
    @pytest.mark.parametrize("sigma", [1.0, 0.75])
    def test_batch_matches_single(self, group_of, sigma):
        group = group_of(101)
        batch = l_value_batch(group, sigma)
        assert len(batch) == 99
        worst = max(
            abs(lv.value - l_value(group.character(lv.chi_index), sigma).value) for lv in batch
        )
        assert worst < 1e-9

    def test_conjugation_symmetry(self, group_of):
        group = group_of(101)
        for sigma in (1.0, 0.75):
            batch = {lv.chi_index: lv.value for lv in l_value_batch(group, sigma)}
            for j in range(1, 100):
                assert abs(batch[(100 - j) % 100] - batch[j].conjugate()) < 1e-10

    @pytest.mark.parametrize("q", [101, 1009])
    def test_series_oracle_agreement(self, group_of, harmonic_by_residue, q):
        group = group_of(q)
        h, m_aligned = harmonic_by_residue(q)
        batch = l_value_batch(group, 1.0)
        worst = 0.0
        for lv in batch:
            oracle = series_l1_oracle(group, lv.chi_index, h, m_aligned)
            worst = max(worst, abs(lv.value - oracle))
        assert worst < 1e-6


def _euler_products_all(group, x: float) -> np.ndarray:
    """(1 - chi_j(p)/p)^(-1) over p <= x, vectorized over every j."""
    values = np.ones(group.q - 1, dtype=complex)
    for p in sieve_primes(int(x)).primes.tolist():
        if p % group.q == 0:
            continue  # chi(p) = 0, unit factor
        values /= 1 - group.values_at(p) / p
    return values


class TestEulerProductTruncated:
    def test_mod4_two_factors(self, chi_mod4):
        assert euler_product_truncated(chi_mod4, 1.0, 3) == pytest.approx(0.75, abs=1e-14)

    def test_principal_single_factor(self, group_of):
        chi0 = group_of(7).character(0)
        assert euler_product_truncated(chi0, 1.0, 2) == pytest.approx(2.0, abs=1e-14)

    def test_below_two_rejected(self, group_of):
        with pytest.raises(ValueError):
            euler_product_truncated(group_of(7).character(1), 1.0, 1.9)

    def test_vectorized_helper_matches_op(self, group_of):
        group = group_of(101)
        products = _euler_products_all(group, 100)
        for j in (1, 7, 50):
            expected = euler_product_truncated(group.character(j), 1.0, 100)
            assert abs(products[j] - expected) < 1e-12

    def test_truncation_max_error_decreases_over_decades(self, group_of):
        group = group_of(1009)
        l_true = np.array([lv.value for lv in l_value_batch(group, 1.0)])
        max_errors = []
        for exponent in range(1, 6):
            products = _euler_products_all(group, 10.0**exponent)
            max_errors.append(float(np.max(np.abs(products[1 : 1008] - l_true))))
        assert all(a > b for a, b in zip(max_errors, max_errors[1:]))


class TestDirichletPolyAndPrimeSum:
    def test_mod4_only_n3_survives(self, chi_mod4):
        assert dirichlet_poly(chi_mod4, 1.0, 4) == pytest.approx(-1 / 3, abs=1e-14)

    def test_below_two_rejected(self, chi_mod4):
        with pytest.raises(ValueError):
            dirichlet_poly(chi_mod4, 1.0, 1.5)

    def test_mod3_hand_enumeration(self, chi_mod3):
        # terms n = 2, 4, 5 (chi(3) = 0): Lambda(n)/(n log n) recomputed via
        # the Lambda oracle; Lambda(4)/log 4 = 1/2 so the value is
        # -1/2 + 1/8 - 1/5 = -0.575
        expected = math.fsum(
            (mangoldt(n) / (n * math.log(n)) * chi_mod3.value(n)).real for n in range(2, 6)
        )
        assert expected == pytest.approx(-0.575, abs=1e-14)
        assert dirichlet_poly(chi_mod3, 1.0, 5) == pytest.approx(expected, abs=1e-14)

    def test_prime_sum_mod3(self, chi_mod3):
        assert prime_sum(chi_mod3, 1.0, 3) == pytest.approx(-0.5, abs=1e-14)

    def test_prime_sum_empty(self, group_of):
        assert prime_sum(group_of(7).character(1), 1.0, 1) == 0j

    def test_prime_sum_principal_mod101(self, group_of):
        chi0 = group_of(101).character(0)
        expected = 1 / 2 + 1 / 3 + 1 / 5 + 1 / 7
        assert prime_sum(chi0, 1.0, 10) == pytest.approx(expected, abs=1e-14)

    @pytest.mark.parametrize("sigma", [0.6, 1.0])
    def test_prime_power_terms_are_small(self, group_of, sigma):
        # dirichlet_poly minus prime_sum is the k >= 2 prime-power block,
        # bounded by sum_{p <= sqrt(x)} sum_{k>=2, p^k<=x} p^(-k sigma)/k <= 3
        group = group_of(101)
        x = 10**4
        bound = 0.0
        for p in sieve_primes(int(math.isqrt(x))).primes.tolist():
            pk, k = p * p, 2
            while pk <= x:
                bound += pk ** (-sigma) / k
                pk *= p
                k += 1
        assert bound <= 3.0
        for j in (1, 17, 50):
            chi = group.character(j)
            diff = dirichlet_poly(chi, sigma, x) - prime_sum(chi, sigma, x)
            assert abs(diff) <= bound + 1e-12


class TestApproxErrorCensus:
    def test_infinite_tolerance_empty(self, group_of):
        census = approx_error_census(group_of(101), 0.75, 100, math.inf)
        assert census.indices == ()

    def test_zero_tolerance_everything(self, group_of):
        census = approx_error_census(group_of(101), 0.75, 100, 0.0)
        assert census.indices == tuple(range(1, 100))

    def test_indices_sorted_and_nonprincipal(self, group_of):
        census = approx_error_census(group_of(101), 0.75, 100, 0.2)
        assert list(census.indices) == sorted(census.indices)
        assert 0 not in census.indices

    def test_regression_q1009(self, group_of):
        # frozen from the first verified run (full pipeline fixture)
        census = approx_error_census(group_of(1009), 0.75, 1e4, 1.0)
        assert census.indices == ()
        assert census.max_deviation == pytest.approx(0.6276041154140851, abs=1e-9)
        assert census.mean_deviation == pytest.approx(0.13411755954076826, abs=1e-9)
