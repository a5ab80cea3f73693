"""Exact position-space evolution of the walk.

One step is the composition of two banded unitaries. Written out against a
site x holding the coin pair (a, b), the first operation scatters

    x - 1  <-  (c/2)(a + b) * (1, -1)
    x      <-  s * (b, a)
    x + 1  <-  (c/2)(a - b) * (1, 1)

and the second scatters

    x - 1  <-  (s*b, 0)
    x      <-  (c*a, -c*b)
    x + 1  <-  (0, s*a)

with c = cos(theta) and s = sin(theta). Both are applied with a fresh output
buffer widened by one site per side, so a state launched at the origin
occupies exactly the window [-2t, 2t] after t steps, with exact zeros outside
the light cone. No amplitude truncation is ever performed.

All functions are pure; independent evolutions can run concurrently.
"""

from __future__ import annotations

import numpy as np

from .core import InitialCoin, ProbabilityDistribution, WalkParameters, WalkState

__all__ = ["initial_state", "apply_u1", "apply_u2", "step", "evolve", "distribution"]


def initial_state(coin: InitialCoin) -> WalkState:
    """The launch state: the coin pair sitting on the single site x = 0."""
    amps = np.zeros((2, 1), dtype=np.complex128)
    amps[0, 0] = coin.alpha
    amps[1, 0] = coin.beta
    return WalkState(t=0, offset=0, amps=amps)


def _scatter_u1(amps: np.ndarray, c: float, s: float) -> np.ndarray:
    n = amps.shape[1]
    out = np.zeros((2, n + 2), dtype=np.complex128)
    a, b = amps[0], amps[1]
    half_sum = 0.5 * c * (a + b)
    half_dif = 0.5 * c * (a - b)
    out[0, 0:n] += half_sum
    out[1, 0:n] -= half_sum
    out[0, 1:n + 1] += s * b
    out[1, 1:n + 1] += s * a
    out[0, 2:n + 2] += half_dif
    out[1, 2:n + 2] += half_dif
    return out


def _scatter_u2(amps: np.ndarray, c: float, s: float) -> np.ndarray:
    n = amps.shape[1]
    out = np.zeros((2, n + 2), dtype=np.complex128)
    a, b = amps[0], amps[1]
    out[0, 0:n] += s * b
    out[0, 1:n + 1] += c * a
    out[1, 1:n + 1] -= c * b
    out[1, 2:n + 2] += s * a
    return out


def apply_u1(state: WalkState, params: WalkParameters) -> WalkState:
    """Apply the first half-step unitary.

    Returns a new state whose window is one site wider on each side. The
    step counter is unchanged; norm is preserved.
    """
    return WalkState(t=state.t, offset=state.offset - 1,
                     amps=_scatter_u1(state.amps, params.c, params.s))


def apply_u2(state: WalkState, params: WalkParameters) -> WalkState:
    """Apply the second half-step unitary (same window/norm behavior)."""
    return WalkState(t=state.t, offset=state.offset - 1,
                     amps=_scatter_u2(state.amps, params.c, params.s))


def step(state: WalkState, params: WalkParameters) -> WalkState:
    """Advance one full step (second unitary after the first); t increments."""
    amps = _scatter_u2(_scatter_u1(state.amps, params.c, params.s),
                       params.c, params.s)
    return WalkState(t=state.t + 1, offset=state.offset - 2, amps=amps)


def evolve(params: WalkParameters, coin: InitialCoin, t: int) -> WalkState:
    """Evolve the launch state for t steps.

    Parameters
    ----------
    params : WalkParameters
    coin : InitialCoin
        Amplitudes placed on the origin at t = 0.
    t : int
        Number of full steps, t >= 0.

    Returns
    -------
    WalkState
        State over the window [-2t, 2t].
    """
    if t < 0:
        raise ValueError(f"step count must be nonnegative, got {t}")
    state = initial_state(coin)
    for _ in range(int(t)):
        state = step(state, params)
    return state


def distribution(state: WalkState) -> ProbabilityDistribution:
    """Finding probabilities P(X_t = x) = |a0(x)|^2 + |a1(x)|^2."""
    probs = np.abs(state.amps[0]) ** 2 + np.abs(state.amps[1]) ** 2
    return ProbabilityDistribution(t=state.t, offset=state.offset, probs=probs)
