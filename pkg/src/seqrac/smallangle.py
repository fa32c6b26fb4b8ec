"""Exact-rational small-angle polynomials for the unsharpness sequence.

For opening angle ``omega -> 0`` the k-th unsharpness parameter behaves as
``lam_k ~ c_k * omega`` where ``c_k = 2^(k-1) * c1 * P_k(c1^2)`` with
``c1 = (1+eps)/(2r)``.  The polynomials obey the quadratic recurrence

    P_1 = 1,  P_2 = 1 + x/2,  P_k = P_{k-1} + 2^(2k-5) * x * P_{k-1}^2,

have degree ``2^(k-1) - 1``, and expanding ``c_k`` in ``c1`` produces only
odd powers.  All coefficients are kept as exact rationals.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .errors import DomainError

POLY_CAP = 20  # degree 2^(k-1)-1 caps memory


@dataclass(frozen=True)
class RationalPolynomial:
    """Polynomial with exact rational coefficients, index = power of x."""

    coefficients: tuple[Fraction, ...]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def __mul__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        out = [Fraction(0)] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return RationalPolynomial(tuple(out))

    def __add__(self, other: "RationalPolynomial") -> "RationalPolynomial":
        n = max(len(self.coefficients), len(other.coefficients))
        out = [Fraction(0)] * n
        for i, a in enumerate(self.coefficients):
            out[i] += a
        for i, b in enumerate(other.coefficients):
            out[i] += b
        return RationalPolynomial(tuple(out))

    def scale(self, s: Fraction) -> "RationalPolynomial":
        return RationalPolynomial(tuple(s * c for c in self.coefficients))

    def shift_up(self) -> "RationalPolynomial":
        """Multiply by x."""
        return RationalPolynomial((Fraction(0),) + self.coefficients)


def _check_order(k: int) -> int:
    k = int(k)
    if not 1 <= k <= POLY_CAP:
        raise DomainError(f"polynomial order {k} outside [1, {POLY_CAP}]")
    return k


@functools.lru_cache(maxsize=None)
def small_angle_poly(k: int) -> RationalPolynomial:
    """The exact polynomial P_k of the quadratic recurrence."""
    k = _check_order(k)
    if k == 1:
        return RationalPolynomial((Fraction(1),))
    if k == 2:
        return RationalPolynomial((Fraction(1), Fraction(1, 2)))
    prev = small_angle_poly(k - 1)
    bump = (prev * prev).scale(Fraction(2) ** (2 * k - 5)).shift_up()
    return prev + bump


def odd_power_expansion(k: int) -> tuple[Fraction, ...]:
    """Coefficients of ``c_k`` on the odd powers ``c1^1, c1^3, ...``.

    These are ``2^(k-1)`` times the P_k coefficients; every even power of
    ``c1`` has coefficient zero exactly.
    """
    p = small_angle_poly(k)
    return tuple(Fraction(2) ** (k - 1) * a for a in p.coefficients)


def leading_coefficient(k: int, c1: float):
    """``c_k = 2^(k-1) * c1 * P_k(c1^2)`` evaluated from the exact polynomial.

    Returns a float when representable, otherwise an mpmath value (the
    coefficients grow doubly exponentially in k).
    """
    _check_order(k)
    if c1 <= 0:
        raise DomainError("c1 must be positive")
    with mp.workdps(40):
        c = mp.mpf(c1)
        val = 2 ** (k - 1) * c * _eval_rational(small_angle_poly(k), c * c)
    f = float(val)
    return f if math.isfinite(f) else val


def _eval_rational(p: RationalPolynomial, x):
    acc = mp.mpf(0)
    for c in reversed(p.coefficients):
        acc = acc * x + mp.mpf(c.numerator) / c.denominator
    return acc


def leading_coefficient_numeric(k: int, c1) -> mp.mpf:
    """Numeric ``c_k`` via the value recurrence; no order cap.

    Used to bracket feasible opening angles for large receiver counts,
    where the exact polynomial would be astronomically large.
    """
    c1 = mp.mpf(c1)
    x = c1 * c1
    p = mp.mpf(1)  # P_1
    for j in range(2, k + 1):
        if j == 2:
            p = 1 + x / 2
        else:
            p = p + mp.mpf(2) ** (2 * j - 5) * x * p * p
    return 2 ** (k - 1) * c1 * p


def omega_estimate(k: int, r: float, epsilon: float) -> float:
    """First-order estimate of the largest workable opening angle.

    Inverts ``lam_k ~ c_k * omega = 1`` with the odd-power expansion of
    ``c_k`` linearised in ``epsilon`` (``c1^n ~ (1 + n*eps)/(2r)^n``), which
    for k=4, r=1 reduces to the closed form ``2048/(85*(765 + 3347*eps))``.
    """
    k = _check_order(k)
    if not 0 < r <= 1:
        raise DomainError(f"r {r} outside (0, 1]")
    if epsilon < 0:
        raise DomainError("epsilon must be >= 0")
    coeffs = odd_power_expansion(k)
    with mp.workdps(40):
        rr = mp.mpf(r)
        eps = mp.mpf(epsilon)
        den = mp.mpf(0)
        for n, b in enumerate(coeffs):
            power = 2 * n + 1
            term = mp.mpf(b.numerator) / b.denominator
            den += term * (1 + power * eps) / (2 * rr) ** power
        return float(1 / den)
