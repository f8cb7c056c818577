"""Statistical model of qubit preparation, measurement, and Bell-pair outputs.

States are represented by their measurement statistics rather than by
amplitudes; every quantity the simulator consumes (agreement probabilities
and two-party correlators) is classical once the measurement directions are
fixed.  All directions live in the x-z plane of the Bloch sphere, written as
an angle theta with theta=0 the z axis and theta=pi/2 the x axis.

For a maximally entangled pair measured along directions ``theta_a`` and
``theta_b`` in that plane, the correlator Pr(equal) - Pr(unequal) equals
``cos(theta_a - theta_b)``.  Equal angles therefore agree with certainty and
orthogonal Bloch angles are statistically independent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .rng import Rng

Z_BASIS = 0  # theta = 0
X_BASIS = 1  # theta = pi/2

# Measurement directions selectable on a nonlocal box, by input index:
# 0 -> z axis, 1 -> x axis, 2 -> (z+x)/sqrt(2), 3 -> (z-x)/sqrt(2).
INPUT_ANGLES = (0.0, math.pi / 2, math.pi / 4, -math.pi / 4)

# correlator_table[k1][k2] = cos(angle(k1) - angle(k2)), precomputed for the
# sixteen box input pairs.
CORRELATOR_TABLE = tuple(
    tuple(math.cos(a1 - a2) for a2 in INPUT_ANGLES) for a1 in INPUT_ANGLES
)


def input_angle(k: int) -> float:
    """Measurement angle for box input index ``k`` in {0, 1, 2, 3}."""
    if k not in (0, 1, 2, 3):
        raise ValueError(f"box input index must be 0..3, got {k}")
    return INPUT_ANGLES[k]


def basis_angle(sigma: int) -> float:
    """Measurement angle for a preparation/measurement basis bit."""
    if sigma not in (0, 1):
        raise ValueError(f"basis must be 0 or 1, got {sigma}")
    return INPUT_ANGLES[sigma]


@dataclass(frozen=True)
class QubitState:
    """One of the four conjugate-basis states: value ``gamma`` in basis ``sigma``."""

    gamma: int
    sigma: int

    def __post_init__(self):
        if self.gamma not in (0, 1) or self.sigma not in (0, 1):
            raise ValueError("gamma and sigma must be bits")


def bell_correlator(theta_a: float, theta_b: float) -> float:
    """Pr(equal) - Pr(unequal) for pair measurements at the given angles."""
    if not (math.isfinite(theta_a) and math.isfinite(theta_b)):
        raise ValueError("angles must be finite")
    return math.cos(theta_a - theta_b)


def measure_direction(state: QubitState, theta: float, rng: Rng) -> int:
    """Measure a prepared qubit along an arbitrary x-z direction.

    Returns the outcome bit; it reproduces the preparation bit with
    probability ``(1 + cos(theta - theta_prep)) / 2``.
    """
    p_match = 0.5 * (1.0 + math.cos(theta - basis_angle(state.sigma)))
    if rng.random() < p_match:
        return state.gamma
    return 1 - state.gamma


def measure_qubit(state: QubitState, basis: int, rng: Rng) -> int:
    """Measure in one of the two protocol bases.

    A matching basis returns the prepared bit with certainty; the conjugate
    basis returns an unbiased coin flip.
    """
    if basis not in (0, 1):
        raise ValueError(f"basis must be 0 or 1, got {basis}")
    if basis == state.sigma:
        return state.gamma
    return rng.bit()


def sample_correlated_pair(corr: float, rng: Rng):
    """Draw a pair of +-1 outcomes with the given correlator.

    The first outcome is drawn uniformly, the second equals it with
    probability ``(1 + corr) / 2``, so each marginal is uniform and the
    first draw never depends on how the second side will be used.
    """
    if not -1.0 <= corr <= 1.0:
        raise ValueError(f"correlator out of range: {corr}")
    a = rng.pm_one()
    b = a if rng.random() < 0.5 * (1.0 + corr) else -a
    return a, b
