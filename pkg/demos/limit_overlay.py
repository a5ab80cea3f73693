"""
Rescaled limit law over the simulated distribution
==================================================

After t steps the finding probabilities oscillate site to site, but their
envelope is already the limit density scaled by 1/t. Overlaying
(1/t) chi(x/t) on the exact simulation shows the agreement, and the
Kolmogorov distance between the rescaled empirical CDF and the limit CDF
quantifies it.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from qwalk import (
    approximate_pmf,
    distribution,
    evolve,
    kolmogorov_distance,
    make_initial_coin,
    make_parameters,
)

out_dir = Path(__file__).resolve().parent / "demo_out"
out_dir.mkdir(exist_ok=True)

coin = make_initial_coin(np.sqrt(0.5), 1j * np.sqrt(0.5))
t = 500

fig, axes = plt.subplots(2, 1, figsize=(9, 7))
for ax, theta, label in ((axes[0], np.pi / 6, "theta = pi/6"),
                         (axes[1], np.pi / 4, "theta = pi/4")):
    params = make_parameters(theta)
    dist = distribution(evolve(params, coin, t))
    overlay = approximate_pmf(dist.positions, t, coin, params)

    ax.plot(dist.positions, dist.probs, lw=0.5, color="tab:blue",
            label="simulation")
    # thin the overlay points so the curve stays readable
    stride = 8
    ax.plot(dist.positions[::stride], overlay[::stride], ".",
            ms=3.5, color="tab:red", label="(1/t) chi(x/t)")
    ax.set_xlim(-1.6 * t, 1.6 * t)
    ax.set_ylabel("P(X_t = x)")
    ax.set_title(f"{label}, t = {t}")
    ax.legend(loc="upper right")

    k = kolmogorov_distance(dist, coin, params)
    print(f"{label}: Kolmogorov distance at t={t} is {k:.4f}")

axes[1].set_xlabel("position x")
fig.tight_layout()
fig.savefig(out_dir / "limit_overlay.png", dpi=150)
print(f"figure written to {out_dir}")
