"""Exact 2x2 Hermitian-operator algebra in Bloch form.

An operator is stored as ``A = t*I + v . sigma`` with ``t`` real and ``v`` a
real 3-vector, where ``sigma`` are the three standard anticommuting spin
observables with eigenvalues +-1.  All constructions here are closed-form:
eigenvalues are ``t +- |v|`` and the anticommutator identity
``{n.sigma, m.sigma} = 2 (n.m) I`` holds exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePair, InvalidState

STATE_TOL = 1e-12
DEGENERACY_TOL = 1e-12

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _as_vec(v) -> tuple[float, float, float]:
    x, y, z = v
    return (float(x), float(y), float(z))


@dataclass(frozen=True)
class HermitianOp:
    """A 2x2 Hermitian operator ``trace_part * I + bloch . sigma``."""

    trace_part: float
    bloch: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "trace_part", float(self.trace_part))
        object.__setattr__(self, "bloch", _as_vec(self.bloch))

    @property
    def bloch_norm(self) -> float:
        return math.hypot(*self.bloch)

    def eigenvalues(self) -> tuple[float, float]:
        """Eigenvalues ``trace_part +- |bloch|``, largest first."""
        b = self.bloch_norm
        return (self.trace_part + b, self.trace_part - b)

    def matrix(self) -> np.ndarray:
        """Explicit complex 2x2 matrix; used as a test oracle only."""
        m = self.trace_part * np.eye(2, dtype=complex)
        for c, p in zip(self.bloch, _PAULI):
            m = m + c * p
        return m

    def __add__(self, other: "HermitianOp") -> "HermitianOp":
        return HermitianOp(
            self.trace_part + other.trace_part,
            tuple(a + b for a, b in zip(self.bloch, other.bloch)),
        )

    def __sub__(self, other: "HermitianOp") -> "HermitianOp":
        return self + (-1.0) * other

    def __rmul__(self, s: float) -> "HermitianOp":
        s = float(s)
        return HermitianOp(s * self.trace_part, tuple(s * c for c in self.bloch))

    def dot_bloch(self, other: "HermitianOp") -> float:
        return sum(a * b for a, b in zip(self.bloch, other.bloch))


@dataclass(frozen=True)
class DensityOp(HermitianOp):
    """A valid qubit state ``(I + n . sigma) / 2``.

    ``trace_part`` is pinned to 1/2; validity (``|n| <= 1`` and positivity)
    is enforced at construction.  Prefer :meth:`from_bloch`.
    """

    def __post_init__(self):
        super().__post_init__()
        if self.trace_part != 0.5:
            raise InvalidState("density operator must have trace_part = 1/2")
        n = 2.0 * self.bloch_norm
        if n > 1.0 + STATE_TOL:
            raise InvalidState(f"Bloch vector norm {n} exceeds 1")
        if min(self.eigenvalues()) < -STATE_TOL:
            raise InvalidState("density operator is not positive semidefinite")

    @classmethod
    def from_bloch(cls, n) -> "DensityOp":
        """State with Bloch vector ``n`` (``rho = (I + n.sigma)/2``)."""
        x, y, z = _as_vec(n)
        return cls(0.5, (x / 2.0, y / 2.0, z / 2.0))

    @property
    def bloch_vector(self) -> tuple[float, float, float]:
        """The conventional Bloch vector ``n`` with ``|n| <= 1``."""
        return tuple(2.0 * c for c in self.bloch)


@dataclass(frozen=True)
class SharpObservable(HermitianOp):
    """A +-1-valued observable: traceless with unit Bloch vector."""

    def __post_init__(self):
        super().__post_init__()
        if self.trace_part != 0.0:
            raise InvalidState("sharp observable must be traceless")
        if abs(self.bloch_norm - 1.0) > STATE_TOL:
            raise InvalidState("sharp observable requires |bloch| = 1")

    @classmethod
    def from_axis(cls, v) -> "SharpObservable":
        x, y, z = _as_vec(v)
        n = math.hypot(x, y, z)
        if n <= DEGENERACY_TOL:
            raise DegeneratePair("cannot orient an observable along a null axis")
        return cls(0.0, (x / n, y / n, z / n))

    def anticommutes_with(self, other: "SharpObservable", tol: float = 1e-12) -> bool:
        """True iff the Bloch axes are orthogonal, i.e. {B1,B2} = 0."""
        return abs(self.dot_bloch(other)) <= tol


def trace_norm(a: HermitianOp) -> float:
    """Sum of absolute eigenvalues: |t + |v|| + |t - |v||."""
    b = a.bloch_norm
    return abs(a.trace_part + b) + abs(a.trace_part - b)


def distinguishability(rho0: DensityOp, rho1: DensityOp) -> float:
    """Half the trace norm of the difference: |n0 - n1| / 2.

    This equals the maximal total-variation distance between the outcome
    statistics of the two states over all measurements.
    """
    return 0.5 * trace_norm(rho0 - rho1)


def helstrom_observable(rho0: DensityOp, rho1: DensityOp) -> SharpObservable:
    """Optimal discrimination observable: unit Bloch vector along n0 - n1.

    Raises DegeneratePair when the states are operationally equivalent, since
    no preferred direction exists and downstream recursions need one.
    """
    d = rho0 - rho1
    if d.bloch_norm <= DEGENERACY_TOL:
        raise DegeneratePair("states are operationally equivalent")
    return SharpObservable.from_axis(d.bloch)


def guessing_probability(rho0: DensityOp, rho1: DensityOp, b: SharpObservable) -> float:
    """Success probability of guess-0-on-plus discrimination with observable b.

    Equals ``(tr[rho0 E+] + tr[rho1 E-]) / 2`` with ``E+- = (I +- b)/2``; for
    the optimal (Helstrom) observable this is ``(1 + distinguishability)/2``.
    """
    # tr[rho E+-] = (1 +- n.b)/2 with n the Bloch vector of rho
    d = rho0 - rho1
    return 0.5 + 0.5 * d.dot_bloch(b)
