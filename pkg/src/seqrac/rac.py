"""The single-round 2->1 random access code over qubit preparations.

Alice encodes two bits into one of four states; a receiver asked for bit
``y`` effectively discriminates the two equal-weight marginal ensembles for
that bit.  The quantities of interest are the pair of marginal
distinguishabilities (Delta1, Delta2), the Born-rule average success
probability, and the critical unsharpness thresholds for beating the
classical bound of 3/4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import DensityOp, distinguishability
from .channel import UnsharpBinaryMeasurement
from .errors import DegenerateThreshold, DomainError

THRESHOLD_DENOM_TOL = 1e-15
QUANTUM_DISC_TOL = 1e-9

BITS = ((0, 0), (0, 1), (1, 0), (1, 1))


@dataclass(frozen=True)
class PreparationFamily:
    """Four qubit states indexed by the input bits (x1, x2)."""

    states: tuple[DensityOp, DensityOp, DensityOp, DensityOp]

    def state(self, x1: int, x2: int) -> DensityOp:
        return self.states[2 * x1 + x2]

    @classmethod
    def from_bloch_vectors(cls, vectors) -> "PreparationFamily":
        return cls(tuple(DensityOp.from_bloch(v) for v in vectors))


@dataclass(frozen=True)
class DistinguishabilityPair:
    """Marginal distinguishabilities (Delta1, Delta2), each in [0, 1]."""

    delta1: float
    delta2: float


@dataclass(frozen=True)
class ThresholdReport:
    """Critical unsharpness values for a distinguishability pair.

    Degenerate denominators are reported as the +inf sentinel so that
    region scans stay total.
    """

    delta_pair: DistinguishabilityPair
    lambda_symmetric_critical: float
    lambda_asymmetric_critical: float
    classical_simplex_violated: bool


def square_preparations(omega: float, r: float = 1.0) -> PreparationFamily:
    """Four states at ``((-1)^x1 cos(omega), 0, (-1)^x2 r sin(omega))``.

    The marginal distinguishabilities are then exactly
    ``(cos(omega), r sin(omega))``; the states are pure iff ``r = 1``.
    """
    omega = float(omega)
    r = float(r)
    if not 0.0 < omega < math.pi / 2:
        raise DomainError(f"omega {omega} outside (0, pi/2)")
    if not 0.0 < r <= 1.0:
        raise DomainError(f"r {r} outside (0, 1]")
    c, s = math.cos(omega), r * math.sin(omega)
    vectors = [((-1) ** x1 * c, 0.0, (-1) ** x2 * s) for x1, x2 in BITS]
    return PreparationFamily.from_bloch_vectors(vectors)


def marginals(prep: PreparationFamily, y: int) -> tuple[DensityOp, DensityOp]:
    """Equal-weight marginal ensembles for bit ``y`` in {1, 2}."""
    if y not in (1, 2):
        raise DomainError(f"bit index {y} not in {{1, 2}}")
    out = []
    for value in (0, 1):
        if y == 1:
            pair = (prep.state(value, 0), prep.state(value, 1))
        else:
            pair = (prep.state(0, value), prep.state(1, value))
        n = tuple(
            0.5 * (a + b)
            for a, b in zip(pair[0].bloch_vector, pair[1].bloch_vector)
        )
        out.append(DensityOp.from_bloch(n))
    return out[0], out[1]


def delta_pair(prep: PreparationFamily) -> DistinguishabilityPair:
    """(Delta1, Delta2) from the trace norms of the marginal differences."""
    d = []
    for y in (1, 2):
        m0, m1 = marginals(prep, y)
        d.append(distinguishability(m0, m1))
    return DistinguishabilityPair(d[0], d[1])


def avg_success(
    prep: PreparationFamily,
    m1: UnsharpBinaryMeasurement,
    m2: UnsharpBinaryMeasurement,
) -> float:
    """Born-rule average success over uniform inputs x in {0,1}^2, y in {1,2}.

    Bounded by ``1/2 + (lam1*Delta1 + lam2*Delta2)/4``, with equality when
    each observable is the Helstrom observable of its marginal pair.
    """
    total = 0.0
    for x1, x2 in BITS:
        rho = prep.state(x1, x2)
        for y, m in ((1, m1), (2, m2)):
            bit = x1 if y == 1 else x2
            sign = +1 if bit == 0 else -1
            total += m.outcome_probability(rho, sign)
    return total / 8.0


def advantage_predicate(
    dp: DistinguishabilityPair, lambda1: float, lambda2: float
) -> bool:
    """True iff ``lam1*Delta1 + lam2*Delta2 > 1`` strictly (success > 3/4)."""
    for lam in (lambda1, lambda2):
        if not 0.0 <= lam <= 1.0:
            raise DomainError(f"unsharpness {lam} outside [0, 1]")
    return lambda1 * dp.delta1 + lambda2 * dp.delta2 > 1.0


def thresholds(dp: DistinguishabilityPair, strict: bool = False) -> ThresholdReport:
    """Symmetric and asymmetric critical unsharpness for a delta pair.

    symmetric: ``1/(Delta1+Delta2)``; asymmetric (lam1 = 1):
    ``(1-Delta1)/Delta2``.  With ``strict=True`` a vanishing denominator
    raises DegenerateThreshold instead of returning the +inf sentinel.
    """
    d1, d2 = dp.delta1, dp.delta2
    for d in (d1, d2):
        if not 0.0 <= d <= 1.0:
            raise DomainError(f"distinguishability {d} outside [0, 1]")

    def ratio(num: float, den: float) -> float:
        if den < THRESHOLD_DENOM_TOL:
            if strict:
                raise DegenerateThreshold(f"denominator {den} below tolerance")
            return math.inf
        return num / den

    return ThresholdReport(
        delta_pair=dp,
        lambda_symmetric_critical=ratio(1.0, d1 + d2),
        lambda_asymmetric_critical=ratio(1.0 - d1, d2),
        classical_simplex_violated=d1 + d2 > 1.0,
    )


def _family_delta_sq(vectors: np.ndarray) -> np.ndarray:
    """Delta1^2 + Delta2^2 for a batch of families.

    ``vectors`` has shape (count, 4, 3); index 4 orders the states as
    (00, 01, 10, 11).
    """
    m0_1 = 0.5 * (vectors[:, 0] + vectors[:, 1])
    m1_1 = 0.5 * (vectors[:, 2] + vectors[:, 3])
    m0_2 = 0.5 * (vectors[:, 0] + vectors[:, 2])
    m1_2 = 0.5 * (vectors[:, 1] + vectors[:, 3])
    d1 = 0.5 * np.linalg.norm(m0_1 - m1_1, axis=1)
    d2 = 0.5 * np.linalg.norm(m0_2 - m1_2, axis=1)
    return d1**2 + d2**2


def sample_bloch_vectors(
    count: int, seed: int, pure: bool = False
) -> np.ndarray:
    """(count, 4, 3) Bloch vectors, uniform in the ball or on the sphere."""
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    v = rng.normal(size=(count, 4, 3))
    v /= np.linalg.norm(v, axis=2, keepdims=True)
    if not pure:
        radius = rng.random(size=(count, 4, 1)) ** (1.0 / 3.0)
        v *= radius
    return v


def theorem1_sampler(count: int, seed: int, pure: bool = False) -> float:
    """Maximum Delta1^2 + Delta2^2 over ``count`` random families.

    The bound asserts this never exceeds 1; pure-state sampling covers the
    saturating boundary, ball-uniform sampling the interior.
    """
    if count < 1:
        raise DomainError("count must be >= 1")
    vectors = sample_bloch_vectors(count, seed, pure=pure)
    return float(_family_delta_sq(vectors).max())
