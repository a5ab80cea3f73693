"""Quantitative comparison between simulated walks and their limit laws.

Provides rescaled empirical moments, the limit moments computed along two
independent routes, the Kolmogorov distance between empirical and limit
distribution functions, and the probability mass caught inside the gap.
Everything here is deterministic and pure; parameter sweeps can run as
independent parallel jobs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_legendre

from .core import (
    InitialCoin,
    NonConvergenceError,
    ProbabilityDistribution,
    UnsupportedParameterError,
    WalkParameters,
    is_gapless_angle,
)
from .limit import limit_law, support_geometry
from .spectral import branch_weights, speed_profile

__all__ = [
    "ComparisonReport",
    "empirical_moment",
    "momentum_moment",
    "limit_moment",
    "kolmogorov_distance",
    "gap_mass",
    "central_mass",
    "build_report",
]

DEFAULT_QUADRATURE_NODES = 4096


@lru_cache(maxsize=8)
def _gauss_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights mapped to (0, pi)."""
    x, w = roots_legendre(n)
    return 0.5 * np.pi * (x + 1.0), 0.5 * np.pi * w


def empirical_moment(dist: ProbabilityDistribution, r: int) -> float:
    """E[(X_t / t)^r] of a simulated distribution."""
    if r < 0:
        raise ValueError(f"moment order must be nonnegative, got {r!r}")
    if dist.t < 1:
        raise ValueError("empirical moments require t >= 1")
    xs = dist.positions / dist.t
    return float(np.sum(xs ** r * dist.probs))


def momentum_moment(coin: InitialCoin, params: WalkParameters, r: int,
                    n_nodes: int = DEFAULT_QUADRATURE_NODES) -> float:
    """Limit of E[(X_t / t)^r] by quadrature over momentum space.

    Integrates the branch group velocities raised to the r-th power against
    the initial coin's spectral weights,

        (1/2 pi) int_0^pi [(-h)^r w_minus(k) + h^r w_plus(k)] dk,

    using Gauss-Legendre nodes strictly interior to (0, pi) (the degenerate
    momenta 0 and pi are measure zero and never sampled). Valid at every
    admissible theta.
    """
    if r < 0:
        raise ValueError(f"moment order must be nonnegative, got {r!r}")
    ks, w = _gauss_nodes(n_nodes)
    minus_w, plus_w = branch_weights(ks, coin, params)
    h = speed_profile(ks, params)
    vals = (-h) ** r * minus_w + h ** r * plus_w
    return float(np.sum(w * vals) / (2.0 * np.pi))


def limit_moment(coin: InitialCoin, params: WalkParameters, r: int, *,
                 n_nodes: int = DEFAULT_QUADRATURE_NODES,
                 tol: float = 1e-6) -> float:
    """Limit of E[(X_t / t)^r], cross-checked along two independent routes.

    Route one integrates over momentum space (momentum_moment); route two
    integrates x^r against the closed-form limit density. The two must agree
    within tol; their independence makes this the strongest internal
    consistency check the package has.

    Raises
    ------
    NonConvergenceError
        If the two routes disagree by more than tol.
    """
    via_momentum = momentum_moment(coin, params, r, n_nodes)
    via_density = limit_law(params, coin).moment(r)
    if abs(via_momentum - via_density) > tol:
        raise NonConvergenceError(
            f"moment routes disagree at r={r}: momentum {via_momentum!r} "
            f"vs density {via_density!r}")
    return via_momentum


def kolmogorov_distance(dist: ProbabilityDistribution, coin: InitialCoin,
                        params: WalkParameters) -> float:
    """sup-distance between the rescaled empirical CDF and the limit CDF.

    The right-continuous empirical CDF of X_t / t is constant between
    consecutive lattice points, so it is sampled at the midpoints
    (x + 1/2) / t and compared with the limit CDF there; this avoids the
    half-plateau bias of sampling at the jump points themselves.
    """
    law = limit_law(params, coin)
    ecdf = np.cumsum(dist.probs)
    mids = (dist.positions + 0.5) / dist.t
    return float(np.max(np.abs(ecdf - law.cdf(mids))))


def gap_mass(dist: ProbabilityDistribution, params: WalkParameters,
             margin: float = 0.8) -> float:
    """Probability mass inside the scaled gap window |x| <= margin*inner*t.

    margin < 1 keeps the window strictly inside the theoretical gap so that
    finite-t leakage at the gap edges does not mask the emptying.

    Raises
    ------
    UnsupportedParameterError
        In the gapless regime (inner = 0), where no gap window exists; use
        central_mass with an explicit window instead.
    """
    if not 0.0 < margin < 1.0:
        raise ValueError(f"margin must lie in (0, 1), got {margin!r}")
    if is_gapless_angle(params.theta):
        raise UnsupportedParameterError(
            "no gap exists at theta = pi/4 or 3pi/4; "
            "use central_mass(dist, half_width)")
    inner = support_geometry(params).inner
    return central_mass(dist, margin * inner * dist.t)


def central_mass(dist: ProbabilityDistribution, half_width: float) -> float:
    """Probability mass in the absolute window |x| <= half_width."""
    xs = dist.positions
    return float(dist.probs[np.abs(xs) <= half_width].sum())


@dataclass(frozen=True)
class ComparisonReport:
    """Summary of one simulation-versus-theory comparison.

    moments holds rows (r, empirical, limit, abs_err). gap_mass is measured
    in the scaled gap window when one exists, otherwise in the absolute
    window recorded by gap_window_halfwidth with no_gap_regime set.
    gap_width is the full theoretical width 2*inner*t of the emptying
    interval at this t (zero in the gapless regime).
    """

    t: int
    theta: float
    alpha: complex
    beta: complex
    kolmogorov_distance: float
    gap_mass: float
    gap_width: float
    gap_window_halfwidth: float
    no_gap_regime: bool
    moments: tuple[tuple[int, float, float, float], ...]

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "theta": self.theta,
            "alpha": _format_complex(self.alpha),
            "beta": _format_complex(self.beta),
            "kolmogorov_distance": self.kolmogorov_distance,
            "gap_mass": self.gap_mass,
            "gap_width": self.gap_width,
            "gap_window_halfwidth": self.gap_window_halfwidth,
            "no_gap_regime": self.no_gap_regime,
            "moments": [
                {"r": r, "empirical": emp, "limit": lim, "abs_err": err}
                for r, emp, lim, err in self.moments
            ],
        }


def _format_complex(z: complex) -> str:
    return f"{z.real:.17g}{z.imag:+.17g}i"


def build_report(dist: ProbabilityDistribution, coin: InitialCoin,
                 params: WalkParameters, *, margin: float = 0.8,
                 no_gap_window: float = 0.1,
                 moment_orders: tuple[int, ...] = (0, 1, 2)) -> ComparisonReport:
    """Assemble a ComparisonReport for one simulated distribution.

    In the gapless regime the central mass is taken over |x| <=
    no_gap_window * t (and flagged); otherwise over the scaled gap window.
    """
    no_gap = is_gapless_angle(params.theta)
    inner = support_geometry(params).inner
    if no_gap:
        half_width = no_gap_window * dist.t
        mass = central_mass(dist, half_width)
    else:
        half_width = margin * inner * dist.t
        mass = gap_mass(dist, params, margin)
    rows = []
    for r in moment_orders:
        emp = empirical_moment(dist, r)
        lim = limit_moment(coin, params, r)
        rows.append((r, emp, lim, abs(emp - lim)))
    return ComparisonReport(
        t=dist.t,
        theta=params.theta,
        alpha=coin.alpha,
        beta=coin.beta,
        kolmogorov_distance=kolmogorov_distance(dist, coin, params),
        gap_mass=mass,
        gap_width=2.0 * inner * dist.t,
        gap_window_halfwidth=half_width,
        no_gap_regime=no_gap,
        moments=tuple(rows),
    )
