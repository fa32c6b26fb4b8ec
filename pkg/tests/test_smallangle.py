"""Exact-rational polynomial recurrence and the small-angle estimate."""

import math
from fractions import Fraction

import mpmath as mp
import pytest

from seqrac import (
    DomainError,
    RationalPolynomial,
    lambda_sequence,
    leading_coefficient,
    odd_power_expansion,
    omega_estimate,
    small_angle_poly,
)
from seqrac.smallangle import POLY_CAP, leading_coefficient_numeric

F = Fraction


class TestRationalPolynomial:
    def test_horner_evaluation(self):
        p = RationalPolynomial((F(1), F(0), F(3)))
        assert p(F(2)) == F(13)
        assert p.degree == 2

    def test_ring_operations(self):
        p = RationalPolynomial((F(1), F(2)))
        q = RationalPolynomial((F(3), F(0), F(1)))
        assert (p * q).coefficients == (F(3), F(6), F(1), F(2))
        assert (p + q).coefficients == (F(4), F(2), F(1))
        assert p.scale(F(1, 2)).coefficients == (F(1, 2), F(1))
        assert p.shift_up().coefficients == (F(0), F(1), F(2))


class TestRecurrence:
    def test_first_polynomials_exact(self):
        assert small_angle_poly(1).coefficients == (F(1),)
        assert small_angle_poly(2).coefficients == (F(1), F(1, 2))
        # P3 = P2 + 2*x*P2^2
        assert small_angle_poly(3).coefficients == (
            F(1), F(5, 2), F(2), F(1, 2),
        )
        assert small_angle_poly(4).coefficients == (
            F(1), F(21, 2), F(42), F(165, 2), F(88), F(52), F(16), F(2),
        )

    def test_degree_growth(self):
        for k in range(1, 9):
            assert small_angle_poly(k).degree == 2 ** (k - 1) - 1

    def test_order_cap(self):
        with pytest.raises(DomainError):
            small_angle_poly(0)
        with pytest.raises(DomainError):
            small_angle_poly(POLY_CAP + 1)


class TestOddPowerExpansion:
    def test_reference_integer_tables(self):
        assert odd_power_expansion(2) == (F(2), F(1))
        assert odd_power_expansion(3) == (F(4), F(10), F(8), F(2))
        assert odd_power_expansion(4) == (
            F(8), F(84), F(336), F(660), F(704), F(416), F(128), F(16),
        )

    def test_leading_coefficient_consistent_with_expansion(self):
        c1 = 0.37
        val = sum(float(b) * c1 ** (2 * n + 1) for n, b in enumerate(odd_power_expansion(4)))
        assert leading_coefficient(4, c1) == pytest.approx(val, rel=1e-13)

    def test_unit_values(self):
        assert leading_coefficient(1, 1.0) == pytest.approx(2 ** 0 * 1.0)
        assert leading_coefficient(2, 1.0) == pytest.approx(3.0)

    def test_numeric_recurrence_matches_exact(self):
        for k in range(1, 9):
            exact = leading_coefficient(k, 0.5)
            numeric = leading_coefficient_numeric(k, mp.mpf("0.5"))
            assert float(numeric) == pytest.approx(float(exact), rel=1e-12)

    def test_numeric_recurrence_has_no_cap(self):
        # doubly exponential growth: far beyond double range, still finite
        big = leading_coefficient_numeric(16, mp.mpf("0.50005"))
        assert big > mp.mpf("1e9000")


class TestOmegaEstimate:
    def test_reduces_to_quartic_closed_form(self):
        eps = 1e-4
        want = 2048.0 / (85.0 * (765.0 + 3347.0 * eps))
        assert omega_estimate(4, 1.0, eps) == pytest.approx(want, rel=1e-9)
        assert omega_estimate(4, 1.0, eps) == pytest.approx(0.0315, abs=5e-4)

    def test_matches_exact_inverse_coefficient(self):
        # the epsilon-linearised estimate tracks 1/c_k to first order
        eps = 1e-4
        exact = 1.0 / leading_coefficient(4, (1.0 + eps) / 2.0)
        assert omega_estimate(4, 1.0, eps) == pytest.approx(exact, rel=1e-6)

    def test_zero_epsilon_is_exact_inverse(self):
        for k in (2, 3, 4, 5):
            want = 1.0 / leading_coefficient(k, 0.5)
            assert omega_estimate(k, 1.0, 0.0) == pytest.approx(want, rel=1e-12)

    def test_domain_checks(self):
        with pytest.raises(DomainError):
            omega_estimate(4, 0.0, 1e-4)
        with pytest.raises(DomainError):
            omega_estimate(4, 1.0, -1e-4)


class TestSmallAngleConsistency:
    # lam_k = c_k*omega*(1 + g_k*omega^2 + ...); the measured second-order
    # constants g_k are ~0.08, 0.06, 0.06, 2.0, 248, 4.6e6 for k = 1..6,
    # growing with c_k^2, so a fixed multiple of omega^2 only bounds the
    # error for small k
    @pytest.mark.parametrize("omega", [1e-3, 1e-4])
    def test_recursion_approaches_polynomial_prediction(self, omega):
        s = lambda_sequence(omega, 1.0, 1e-12, 6)
        for k in range(1, 5):
            c_k = leading_coefficient(k, 0.5)
            lam = float(s.lambdas[k - 1])
            rel = abs(lam - c_k * omega) / (c_k * omega)
            assert rel < 5.0 * omega * omega

    def test_second_order_constant_growth(self):
        omega = 1e-4
        s = lambda_sequence(omega, 1.0, 1e-12, 6)
        constants = []
        for k in range(1, 6):
            c_k = leading_coefficient(k, 0.5)
            lam = float(s.lambdas[k - 1])
            constants.append(abs(lam - c_k * omega) / (c_k * omega) / omega**2)
        assert constants[3] == pytest.approx(1.95, rel=0.05)
        assert constants[4] == pytest.approx(248.0, rel=0.05)

    def test_fifth_receiver_leaves_unit_interval_at_milli_angle(self):
        # c_5 ~ 4095, so omega=1e-3 already pushes lam_5 above 1 and the
        # recursion truncates there: lam_6 is undefined, not just inaccurate
        s = lambda_sequence(1e-3, 1.0, 1e-12, 6)
        assert not s.feasible
        assert s.first_failure == 5
        assert len(s.lambdas) == 5
        assert float(s.lambdas[4]) > 4.0
