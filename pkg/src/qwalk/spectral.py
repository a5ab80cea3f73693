"""Momentum-space view of the walk.

Under the transform psi_hat(k) = sum_x exp(-i k x) psi(x), one step acts at
each momentum k as the 2x2 unitary U2_hat(k) U1_hat(k). This module exposes
those operators, their eigensystem and group velocity, the four-fold
Hadamard-step factorization available at theta = pi/4 and 3pi/4, and an
independent evolution oracle built on exact discrete Fourier inversion.

Everything is a pure function of (k, params); grid evaluations vectorize
over k and are safe to run concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    AliasingError,
    DegenerateMomentumError,
    GAPLESS_ANGLE_TOL,
    InitialCoin,
    ProbabilityDistribution,
    UnsupportedParameterError,
    WalkParameters,
)

__all__ = [
    "EigenSystemAt",
    "u1_hat",
    "u2_hat",
    "one_step_operator",
    "phase_cosine",
    "eigensystem",
    "group_velocity",
    "branch_weights",
    "speed_profile",
    "hadamard_factorization_residual",
    "fourier_evolve",
]

# sin k below this is treated as exactly degenerate (covers float pi itself)
_DEGENERATE_SIN_TOL = 4e-16

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
HADAMARD_ALT = np.array([[-1.0, -1.0], [1.0, -1.0]]) / np.sqrt(2.0)


@dataclass(frozen=True)
class EigenSystemAt:
    """Eigenvalues and normalized eigenvectors of the one-step operator at k.

    lambda1 carries the +i branch of the square root, lambda2 the -i branch;
    n1 and n2 are the squared norms of the unnormalized eigenvector formulas
    (the normalizing factors).
    """

    k: float
    lambda1: complex
    lambda2: complex
    v1: np.ndarray
    v2: np.ndarray
    n1: float
    n2: float


def u1_hat(k, params: WalkParameters) -> np.ndarray:
    """First half-step operator at momentum k.

    [[c cos k, s + i c sin k], [s - i c sin k, -c cos k]]; Hermitian and
    unitary with determinant -1. Vectorizes over k, returning shape
    k.shape + (2, 2).
    """
    c, s = params.c, params.s
    k = np.asarray(k, dtype=float)
    out = np.empty(k.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = c * np.cos(k)
    out[..., 0, 1] = s + 1j * c * np.sin(k)
    out[..., 1, 0] = s - 1j * c * np.sin(k)
    out[..., 1, 1] = -c * np.cos(k)
    return out


def u2_hat(k, params: WalkParameters) -> np.ndarray:
    """Second half-step operator at momentum k.

    [[c, s e^{ik}], [s e^{-ik}, -c]]; Hermitian and unitary with
    determinant -1.
    """
    c, s = params.c, params.s
    k = np.asarray(k, dtype=float)
    out = np.empty(k.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = c
    out[..., 0, 1] = s * np.exp(1j * k)
    out[..., 1, 0] = s * np.exp(-1j * k)
    out[..., 1, 1] = -c
    return out


def one_step_operator(k, params: WalkParameters) -> np.ndarray:
    """The product u2_hat(k) @ u1_hat(k): unitary with determinant 1."""
    return u2_hat(k, params) @ u1_hat(k, params)


def phase_cosine(k, params: WalkParameters):
    """g(k) = cos k + c s sin^2 k, the cosine of the eigenvalue phase.

    Equals half the trace of the one-step operator and stays in [-1, 1].
    """
    c, s = params.c, params.s
    k = np.asarray(k, dtype=float)
    return np.cos(k) + c * s * np.sin(k) ** 2


def _phase_sine(k, params: WalkParameters):
    """sqrt(1 - g(k)^2) evaluated without cancellation.

    Uses the exact factoring
    1 - g^2 = sin^2(k) * (1 - cs - cs*cos k) * (1 + cs - cs*cos k),
    which keeps full relative accuracy near k = 0 and k = pi where the
    naive 1 - g^2 loses all its digits.
    """
    c, s = params.c, params.s
    k = np.asarray(k, dtype=float)
    u = np.cos(k)
    cs = c * s
    return np.abs(np.sin(k)) * np.sqrt((1 - cs - cs * u) * (1 + cs - cs * u))


def _eigvec_parts(k, params: WalkParameters, j: int):
    """Unnormalized eigenvector components and the normalizing factor."""
    c, s = params.c, params.s
    sk, ck = np.sin(k), np.cos(k)
    root = _phase_sine(k, params)
    comp0 = c * s * sk ** 2 + 1j * c * (c - s * ck) * sk
    second = -((-1) ** j) * root - s * (s - c * ck) * sk
    nj = c ** 2 * (1 - 2 * c * s * ck) * sk ** 2 + second ** 2
    return comp0, 1j * second, nj


def _eigvec(k, params: WalkParameters, j: int) -> np.ndarray:
    comp0, comp1, nj = _eigvec_parts(k, params, j)
    v = np.stack([np.asarray(comp0, dtype=np.complex128),
                  np.asarray(comp1, dtype=np.complex128)], axis=-1)
    return v / np.sqrt(np.asarray(nj))[..., None]


def eigensystem(k: float, params: WalkParameters) -> EigenSystemAt:
    """Eigenvalues and eigenvectors of the one-step operator at momentum k.

    The eigenvalues are g(k) +- i sqrt(1 - g(k)^2), a unit-modulus pair with
    product 1 and sum 2 g(k). Branch 1 is the +i branch.

    Raises
    ------
    DegenerateMomentumError
        At sin k = 0 (k = 0 or +-pi) the pair collapses to +-1 and the
        eigenvector formula returns the zero vector, so no eigensystem is
        produced there.
    """
    k = float(k)
    if abs(np.sin(k)) <= _DEGENERATE_SIN_TOL:
        raise DegenerateMomentumError(
            f"eigenvalue pair is degenerate at k = {k!r} (sin k = 0)")
    g = float(phase_cosine(k, params))
    root = float(_phase_sine(k, params))
    v1 = _eigvec(k, params, 1)
    v2 = _eigvec(k, params, 2)
    _, _, n1 = _eigvec_parts(k, params, 1)
    _, _, n2 = _eigvec_parts(k, params, 2)
    return EigenSystemAt(k=k, lambda1=complex(g, root), lambda2=complex(g, -root),
                         v1=v1, v2=v2, n1=float(n1), n2=float(n2))


def speed_profile(k, params: WalkParameters):
    """h(k) = (1 - 2 c s cos k) / sqrt((1 - cs - cs cos k)(1 + cs - cs cos k)).

    The magnitude of the group velocity as a function of momentum. Strictly
    monotone on (0, pi), increasing for c > 0 and decreasing for c < 0, with
    endpoint limits sqrt(1 - 2 c s) at k -> 0 and sqrt(1 + 2 c s) at k -> pi.
    Depends on k only through cos k, so it extends evenly to [-pi, pi].
    """
    c, s = params.c, params.s
    u = np.cos(np.asarray(k, dtype=float))
    cs = c * s
    return (1 - 2 * cs * u) / np.sqrt((1 - cs - cs * u) * (1 + cs - cs * u))


def group_velocity(k, params: WalkParameters, j: int):
    """i lambda_j'(k) / lambda_j(k) = (-1)^j sign(sin k) h(k).

    Branch j = 1 moves with velocity -h(k) for k in (0, pi), branch j = 2
    with +h(k). Raises DegenerateMomentumError where sin k = 0.
    """
    if j not in (1, 2):
        raise ValueError(f"branch index must be 1 or 2, got {j!r}")
    k = np.asarray(k, dtype=float)
    sk = np.sin(k)
    if np.any(np.abs(sk) <= _DEGENERATE_SIN_TOL):
        raise DegenerateMomentumError("group velocity undefined where sin k = 0")
    return (-1) ** j * np.sign(sk) * speed_profile(k, params)


def branch_weights(k, coin: InitialCoin, params: WalkParameters):
    """Spectral weight of the initial coin on the two velocity branches.

    At momentum k in (0, pi) the modes moving with velocity -h(k) are branch
    1 at +k and branch 2 at -k; the modes moving with +h(k) are the other
    pair. Returns (minus_weight, plus_weight), the initial coin's total
    squared overlap with each pair. The two always sum to 2, one unit of
    mass from each of +-k. Vectorized over k.

    Raises
    ------
    DegenerateMomentumError
        Where sin k = 0 and the branch split is undefined.
    """
    k = np.asarray(k, dtype=float)
    if np.any(np.abs(np.sin(k)) <= _DEGENERATE_SIN_TOL):
        raise DegenerateMomentumError(
            "branch weights undefined where sin k = 0")
    spinor = coin.as_vector()
    minus_w = (np.abs(_eigvec(k, params, 1) @ spinor.conj()) ** 2
               + np.abs(_eigvec(-k, params, 2) @ spinor.conj()) ** 2)
    plus_w = (np.abs(_eigvec(k, params, 2) @ spinor.conj()) ** 2
              + np.abs(_eigvec(-k, params, 1) @ spinor.conj()) ** 2)
    return minus_w, plus_w


def _phase_shift(k) -> np.ndarray:
    """diag(e^{ik}, e^{-ik}), a one-site relative shift between coin rows."""
    k = np.asarray(k, dtype=float)
    out = np.zeros(k.shape + (2, 2), dtype=np.complex128)
    out[..., 0, 0] = np.exp(1j * k)
    out[..., 1, 1] = np.exp(-1j * k)
    return out


def hadamard_factorization_residual(k, params: WalkParameters):
    """Max-norm deviation of the one-step operator from its Hadamard-step form.

    At theta = pi/4 the one-step operator factors exactly as
    -(R(k/2) Ht)^4, and at theta = 3pi/4 as +(R(k/2) H)^4, where
    R(k) = diag(e^{ik}, e^{-ik}), H is the Hadamard matrix and Ht its
    sign-twisted variant [[-1, -1], [1, -1]]/sqrt(2). The two pairings are
    not interchangeable; swapping them leaves an order-one residual.
    Vectorizes over k.

    Raises
    ------
    UnsupportedParameterError
        For any other theta (routing tolerance 1e-12).
    """
    theta = params.theta
    if abs(theta - np.pi / 4) < GAPLESS_ANGLE_TOL:
        coin_mat, overall = HADAMARD_ALT, -1.0
    elif abs(theta - 3 * np.pi / 4) < GAPLESS_ANGLE_TOL:
        coin_mat, overall = HADAMARD, +1.0
    else:
        raise UnsupportedParameterError(
            "factorization only exists at theta = pi/4 or 3pi/4, "
            f"got theta = {theta!r}")
    k = np.asarray(k, dtype=float)
    half_step = _phase_shift(k / 2) @ coin_mat
    quad = half_step @ half_step
    quad = quad @ quad
    resid = one_step_operator(k, params) - overall * quad
    return np.max(np.abs(resid), axis=(-2, -1))


def fourier_evolve(params: WalkParameters, coin: InitialCoin, t: int,
                   n_nodes: int | None = None) -> ProbabilityDistribution:
    """Evolve through momentum space and invert; an oracle for the engine.

    The launch coin transforms to the constant function psi_hat_0(k) =
    (alpha, beta). Each of n_nodes uniform momentum samples is advanced by
    the t-th power of the one-step operator (binary exponentiation on the
    stacked 2x2 blocks), then the position amplitudes come back through the
    inverse discrete transform. Since the state after t steps is supported
    on [-2t, 2t], any n_nodes >= 4t + 1 makes the inversion exact.

    Raises
    ------
    AliasingError
        If n_nodes < 4t + 1, where wraparound would corrupt the window.
    """
    if t < 0:
        raise ValueError(f"step count must be nonnegative, got {t}")
    t = int(t)
    if n_nodes is None:
        n_nodes = 4 * t + 1
    n_nodes = int(n_nodes)
    if n_nodes < 4 * t + 1:
        raise AliasingError(
            f"need at least 4t + 1 = {4 * t + 1} momentum nodes, got {n_nodes}")
    ks = 2.0 * np.pi * np.arange(n_nodes) / n_nodes
    m = one_step_operator(ks, params)
    power = np.broadcast_to(np.eye(2, dtype=np.complex128), m.shape).copy()
    e = t
    while e:
        if e & 1:
            power = power @ m
        m = m @ m
        e >>= 1
    psi_hat = power @ coin.as_vector()
    psi = np.fft.ifft(psi_hat, axis=0)
    xs = np.arange(-2 * t, 2 * t + 1)
    sampled = psi[xs % n_nodes]
    probs = np.abs(sampled[:, 0]) ** 2 + np.abs(sampled[:, 1]) ** 2
    return ProbabilityDistribution(t=t, offset=-2 * t, probs=probs)
