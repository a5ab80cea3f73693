"""
Convergence of rescaled moments and CDF distance
================================================

The moments of X_t / t converge to the moments of the limit law, and the
Kolmogorov distance between the rescaled empirical CDF and the limit CDF
shrinks with t. Both are computed here over a doubling sweep of run
lengths; the limit values come from momentum-space quadrature that is
independently cross-checked against the closed-form density inside
limit_moment.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from qwalk import (
    distribution,
    empirical_moment,
    evolve,
    kolmogorov_distance,
    limit_moment,
    make_initial_coin,
    make_parameters,
)

out_dir = Path(__file__).resolve().parent / "demo_out"
out_dir.mkdir(exist_ok=True)

params = make_parameters(np.pi / 6)
coin = make_initial_coin(0.6, 0.8j)  # tilted launch, nonzero drift
times = [25, 50, 100, 200, 400, 800]

targets = {r: limit_moment(coin, params, r) for r in (1, 2)}
print("limit moments:", {r: f"{v:.6f}" for r, v in targets.items()})

errors = {r: [] for r in targets}
distances = []
for t in times:
    dist = distribution(evolve(params, coin, t))
    distances.append(kolmogorov_distance(dist, coin, params))
    for r in targets:
        errors[r].append(abs(empirical_moment(dist, r) - targets[r]))
    print(f"t = {t:4d}: K = {distances[-1]:.4f}, "
          + ", ".join(f"|moment {r} err| = {errors[r][-1]:.2e}"
                      for r in targets))

fig, (ax_mom, ax_k) = plt.subplots(1, 2, figsize=(10, 4))
for r, errs in errors.items():
    ax_mom.loglog(times, errs, "o-", label=f"order {r}")
ax_mom.set_xlabel("steps t")
ax_mom.set_ylabel("|empirical - limit|")
ax_mom.set_title("moment convergence")
ax_mom.legend()

ax_k.loglog(times, distances, "s-", color="tab:red")
ax_k.set_xlabel("steps t")
ax_k.set_ylabel("Kolmogorov distance")
ax_k.set_title("CDF convergence")

fig.tight_layout()
fig.savefig(out_dir / "moments_convergence.png", dpi=150)
print(f"figure written to {out_dir}")
