"""Phase-space zones in both coordinate charts.

Large frequencies |xi| >= N (Phi_eps(t-1) + 1) stay hyperbolic; the wedge
underneath (still above |xi| = N) is the singular zone where the dissipation
spike dominates; |xi| <= N is handled directly.  In the stretched variables
(tau, Lambda) the singular zone stabilizes as eps -> 0.

Run:  python demos/02_zone_geometry.py
"""

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

import singwave as sw
from singwave.zones import boundary_polyline

OUT = os.path.join(os.path.dirname(__file__), "..", "demo_out")
os.makedirs(OUT, exist_ok=True)

ev = sw.default_eval()
zc = ev.zone_constant()
print(f"certified zone constant N = {zc.N:.4f}  (c1 = {zc.c1:.4f}, c2 = {zc.c2:.4f})")

fig, axes = plt.subplots(1, 2, figsize=(11, 4))
for eps, color in ((0.2, "C0"), (0.1, "C1"), (0.05, "C2")):
    table = boundary_polyline(ev.moll, eps, zc)
    t, xi, tau, lam = table.T
    axes[0].plot(t, xi, color, label=f"eps={eps}")
    axes[1].plot(tau, lam, color, label=f"eps={eps}")
axes[0].axhline(zc.N, color="k", lw=0.8, ls=":")
axes[0].set(xlabel="t", ylabel="|xi|", title="hyp/sing boundary, (t, xi) chart",
            yscale="log")
axes[1].axhline(zc.N * 0.05, color="k", lw=0.8, ls=":")
axes[1].set(xlabel="tau", ylabel="Lambda", title="same curve, (tau, Lambda) chart")
for ax in axes:
    ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(OUT, "zones.png"), dpi=130)
print("wrote", os.path.join(OUT, "zones.png"))

# a trajectory at fixed |xi| enters and leaves the singular zone at t_xi
for xi in (22.0, 42.0, 80.0):
    bounds = sw.hyp_boundary_times(ev.moll, xi, 0.1, 2.0)
    print(f"|xi| = {xi}: singular window at eps=0.1, N=2 -> {bounds}")
