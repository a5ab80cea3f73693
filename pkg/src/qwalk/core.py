"""Shared domain types and validation for the two-operator quantum walk.

The walk lives on the integer lattice with a two-dimensional coin attached to
every site. A single angle theta in (0, pi), excluding pi/2, fixes both
unitary operations through c = cos(theta) and s = sin(theta). All types here
are immutable value objects, safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "WalkParameters",
    "InitialCoin",
    "CoinSpinor",
    "WalkState",
    "ProbabilityDistribution",
    "UnsupportedParameterError",
    "DegenerateMomentumError",
    "AliasingError",
    "NonConvergenceError",
    "make_parameters",
    "make_initial_coin",
    "is_gapless_angle",
    "validate_state",
    "validate_distribution",
    "GAPLESS_ANGLE_TOL",
]

# routing tolerance for the two angles whose limit law has no gap
GAPLESS_ANGLE_TOL = 1e-12


class UnsupportedParameterError(ValueError):
    """An operation was called with parameters outside its supported regime."""


class DegenerateMomentumError(ValueError):
    """The eigenvalue pair collapses at this momentum (sin k = 0)."""


class AliasingError(ValueError):
    """Too few momentum nodes to resolve the walk's support without wraparound."""


class NonConvergenceError(RuntimeError):
    """A quadrature or cross-check failed to reach its accuracy target."""


@dataclass(frozen=True)
class WalkParameters:
    """The angle theta with cached c = cos(theta) and s = sin(theta).

    Construct through :func:`make_parameters`, which enforces the admissible
    range. For every valid instance, s > 0 and c is nonzero.
    """

    theta: float
    c: float
    s: float

    def __hash__(self) -> int:
        return hash(self.theta)


@dataclass(frozen=True)
class InitialCoin:
    """Normalized coin amplitudes (alpha, beta) of the launch state.

    Construct through :func:`make_initial_coin`, which enforces
    |alpha|^2 + |beta|^2 = 1.
    """

    alpha: complex
    beta: complex

    def as_vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=np.complex128)


@dataclass(frozen=True)
class CoinSpinor:
    """Amplitude pair on the coin basis at a single site.

    Intermediate sums need not be normalized, so no constraint is imposed.
    """

    a0: complex
    a1: complex


@dataclass(frozen=True)
class WalkState:
    """Dense amplitude field over a contiguous lattice window at step t.

    Attributes
    ----------
    t : int
        Step count since launch.
    offset : int
        Lattice position of the first stored site.
    amps : ndarray
        Complex array of shape (2, n); row 0 holds the |0> coin component
        and row 1 the |1> component for each site in the window.

    The stored window is [-2t, 2t]; sites outside the light cone hold exact
    zeros rather than being truncated away.
    """

    t: int
    offset: int
    amps: np.ndarray = field(repr=False)

    @property
    def positions(self) -> np.ndarray:
        return np.arange(self.amps.shape[1]) + self.offset

    @property
    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def spinor_at(self, x: int) -> CoinSpinor:
        """Amplitudes at lattice site x (zero outside the stored window)."""
        i = x - self.offset
        if i < 0 or i >= self.amps.shape[1]:
            return CoinSpinor(0j, 0j)
        return CoinSpinor(complex(self.amps[0, i]), complex(self.amps[1, i]))


@dataclass(frozen=True)
class ProbabilityDistribution:
    """Finding probabilities P(X_t = x) over the support window."""

    t: int
    offset: int
    probs: np.ndarray = field(repr=False)

    @property
    def positions(self) -> np.ndarray:
        return np.arange(len(self.probs)) + self.offset

    @property
    def total(self) -> float:
        return float(np.sum(self.probs))


def make_parameters(theta: float) -> WalkParameters:
    """Validate theta and cache its cosine and sine.

    Parameters
    ----------
    theta : float
        Angle in radians. Must lie in (0, pi) and stay away from pi/2,
        where cos(theta)*sin(theta) = 0 degenerates the walk's spectral
        structure.

    Returns
    -------
    WalkParameters

    Raises
    ------
    UnsupportedParameterError
        If theta is not a finite real in the admissible range.
    """
    theta = float(theta)
    if not math.isfinite(theta):
        raise UnsupportedParameterError(f"theta must be finite, got {theta!r}")
    if not 0.0 < theta < math.pi:
        raise UnsupportedParameterError(
            f"theta must lie in the open interval (0, pi), got {theta!r}")
    if abs(theta - math.pi / 2) < GAPLESS_ANGLE_TOL:
        raise UnsupportedParameterError(
            "theta = pi/2 is excluded (cos(theta)*sin(theta) = 0)")
    return WalkParameters(theta=theta, c=math.cos(theta), s=math.sin(theta))


def make_initial_coin(alpha: complex, beta: complex) -> InitialCoin:
    """Validate the launch coin (alpha, beta).

    Raises
    ------
    UnsupportedParameterError
        If |alpha|^2 + |beta|^2 deviates from 1 by more than 1e-12, or a
        component is not finite.
    """
    alpha = complex(alpha)
    beta = complex(beta)
    if not (math.isfinite(alpha.real) and math.isfinite(alpha.imag)
            and math.isfinite(beta.real) and math.isfinite(beta.imag)):
        raise UnsupportedParameterError("coin amplitudes must be finite")
    norm2 = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm2 - 1.0) > 1e-12:
        raise UnsupportedParameterError(
            f"coin must be normalized: |alpha|^2 + |beta|^2 = {norm2!r}")
    return InitialCoin(alpha=alpha, beta=beta)


def is_gapless_angle(theta: float) -> bool:
    """True when theta routes to the gap-free limit law (pi/4 or 3pi/4)."""
    return (abs(theta - math.pi / 4) < GAPLESS_ANGLE_TOL
            or abs(theta - 3 * math.pi / 4) < GAPLESS_ANGLE_TOL)


def validate_state(state: WalkState, tol: float = 1e-10) -> None:
    """Check the structural invariants of a walk state.

    The support must fit in the light cone [-2t, 2t] and the total
    probability must equal 1 within tol.
    """
    n = state.amps.shape[1]
    if state.amps.shape[0] != 2:
        raise ValueError("amps must have shape (2, n)")
    lo, hi = state.offset, state.offset + n - 1
    nz = np.nonzero(np.abs(state.amps).sum(axis=0))[0]
    if len(nz):
        lo, hi = state.offset + nz[0], state.offset + nz[-1]
    if lo < -2 * state.t or hi > 2 * state.t:
        raise ValueError(
            f"support [{lo}, {hi}] escapes the light cone [-{2*state.t}, {2*state.t}]")
    if abs(state.norm_squared - 1.0) > tol:
        raise ValueError(f"state norm^2 = {state.norm_squared!r} is not 1")


def validate_distribution(dist: ProbabilityDistribution, tol: float = 1e-10) -> None:
    """Check nonnegativity and unit total mass (within tol)."""
    if np.any(dist.probs < 0):
        raise ValueError("negative probability entry")
    if abs(dist.total - 1.0) > tol:
        raise ValueError(f"total probability {dist.total!r} is not 1")
