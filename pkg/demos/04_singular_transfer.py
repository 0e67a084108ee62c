"""Crossing the singularity: the transfer matrix diag(1, H).

In stretched variables the crossing is a fixed-size problem.  Its fundamental
solution factors into the diagonal transfer F (which tends to diag(1, H) with
H = b(1-0)/b(1+0) = 1/3 here) and a power series in Lambda = eps |xi| whose
coefficients obey a factorial bound.  Shrinking eps and Lambda together along
Lambda = 64 eps shows the joint first-order rate.

Run:  python demos/04_singular_transfer.py
"""

import singwave as sw
from singwave.mat2 import mnorm
from singwave.singular import e_sing, g_series_coefficients, transfer_limit
from singwave.zones import sing_boundary_taus

ev = sw.default_eval()
coeff, moll = ev.coeff, ev.moll
N = ev.zone_constant()
target = transfer_limit(coeff)
print(f"limit transfer diag(1, H) with H = {coeff.H:.6f}")

print("\n||E_sing(across the zone) - diag(1, 1/3)|| along Lambda = 64 eps:")
pairs = []
for k in range(7, 13):
    eps = 2.0**-k
    lam = 64.0 * eps
    taus = sing_boundary_taus(moll, lam, eps, N)
    sp = e_sing(ev, taus[1], taus[0], lam, eps, tol=1e-9)
    err = mnorm(sp.matrix - target)
    pairs.append((eps, err))
    print(f"  eps=2^-{k:2d}  Lambda={lam:.4f}  err={err:.4e}  "
          f"(series order {sp.truncation_order}, tail {sp.tail_bound:.1e})")
print(f"fitted joint slope: {sw.fit_rate(pairs).slope:.3f}")

print("\nfactorial decay of the series coefficients (full window):")
gks, C = g_series_coefficients(ev, 1.8, -1.8, 0.05, 8)
import math

for k, gk in enumerate(gks, start=1):
    bound = C**k * 3.6**k / math.factorial(k)
    print(f"  ||G_{k}|| = {mnorm(gk):.3e}   (bound {bound:.3e})")
