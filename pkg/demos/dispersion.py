"""
Momentum-space anatomy of the walk
==================================

Each momentum k contributes two eigenvalue branches exp(+-i phase(k)); the
gradient of the phase is the group velocity, and its magnitude h(k) sweeps
exactly the interval whose endpoints bound the limit density's support.
The plots show the phase bands, the velocity profile h, and how the
unreachable band of slow speeds opens as theta moves away from pi/4.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from qwalk import make_parameters, phase_cosine, speed_profile, support_geometry

out_dir = Path(__file__).resolve().parent / "demo_out"
out_dir.mkdir(exist_ok=True)

ks = np.linspace(1e-4, np.pi - 1e-4, 2000)

fig, (ax_phase, ax_speed) = plt.subplots(1, 2, figsize=(11, 4.5))
for theta, color in ((np.pi / 6, "tab:blue"), (np.pi / 8, "tab:orange"),
                     (np.pi / 4, "tab:green")):
    params = make_parameters(theta)
    phase = np.arccos(phase_cosine(ks, params))
    h = speed_profile(ks, params)
    geom = support_geometry(params)

    label = f"theta = {theta / np.pi:.3f} pi"
    ax_phase.plot(ks, phase, color=color, label=label)
    ax_phase.plot(ks, -phase, color=color)
    ax_speed.plot(ks, h, color=color, label=label)
    ax_speed.axhline(geom.inner, color=color, ls=":", lw=0.8)
    ax_speed.axhline(geom.outer, color=color, ls=":", lw=0.8)

    print(f"{label}: h ranges over ({geom.inner:.6f}, {geom.outer:.6f})"
          + ("  <- closes at zero, no gap" if not geom.has_gap else ""))

ax_phase.set_xlabel("momentum k")
ax_phase.set_ylabel("eigenvalue phase")
ax_phase.set_title("the two phase bands")
ax_phase.legend(fontsize=8)

ax_speed.set_xlabel("momentum k")
ax_speed.set_ylabel("h(k) = |group velocity|")
ax_speed.set_title("speed profile and its range (dotted)")
ax_speed.legend(fontsize=8)

fig.tight_layout()
fig.savefig(out_dir / "dispersion.png", dpi=150)
print(f"figure written to {out_dir}")
