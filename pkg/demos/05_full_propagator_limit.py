"""Gluing zones and the eps -> 0 limit sandwich.

The full propagator across the singularity composes hyperbolic pieces with the
singular transfer (switching micro-energies in between).  As eps -> 0 at fixed
|xi| it converges, at first order in eps, to the sandwich

    E_hyp(t2, 1+0) . diag(1, H) . E_hyp(1-0, t1),

which is how the jump of log b imprints itself on the wave field.

Run:  python demos/05_full_propagator_limit.py
"""

import numpy as np

import singwave as sw
from singwave.assembly import full_propagator, limit_propagator
from singwave.mat2 import mnorm
from singwave.oracle import IntegratorConfig, direct_propagator

ev = sw.default_eval()
coeff = ev.coeff

print("zone path and oracle agreement at (t1, t2, xi, eps) = (0.5, 1.5, 40, 0.01):")
fp = full_propagator(ev, 0.5, 1.5, 40.0, 0.01)
ref = direct_propagator(ev, 0.5, 1.5, 40.0, 0.01,
                        IntegratorConfig(rel_tol=1e-11, abs_tol=1e-13))
for label, (a, b) in fp.path:
    print(f"  {label.value:5s} [{a:.4f}, {b:.4f}]")
print(f"  ||assembled - direct|| = {mnorm(fp.matrix - ref):.2e}")

print("\nconvergence to the limit sandwich, per |xi|:")
for xi, k0 in ((8.0, 4), (16.0, 5), (32.0, 6)):
    lim = limit_propagator(coeff, 0.5, 1.5, xi)
    pairs = []
    for k in range(k0, k0 + 6):
        eps = 2.0**-k
        fpv = full_propagator(ev, 0.5, 1.5, xi, eps)
        pairs.append((eps, mnorm(fpv.matrix - lim)))
    slope = sw.fit_rate(pairs).slope
    errs = "  ".join(f"{d:.2e}" for _, d in pairs)
    print(f"  |xi|={xi:5.1f}: errors {errs}   slope {slope:.3f}")

print("\nuniform boundedness across the sweep (no growth as eps -> 0):")
for eps in (2.0**-3, 2.0**-6, 2.0**-9):
    norms = [mnorm(full_propagator(ev, 0.25, 1.75, float(xi), eps, tol=1e-8).matrix)
             for xi in np.logspace(0, np.log10(128), 8)]
    print(f"  eps=2^{np.log2(eps):+.0f}: max ||E|| = {max(norms):.4f}")
