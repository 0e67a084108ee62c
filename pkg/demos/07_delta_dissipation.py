"""The delta-dissipation cousin: u_tt + |xi|^2 u + psi_eps(t-1) u_t = 0.

Replacing the quotient b'/b by a mollified Dirac delta gives a closely related
model whose transfer matrix across the singularity tends to

    (1/(2e)) [[1+e, 1-e], [1-e, 1+e]],

the partial-reflection matrix evaluated at H = 1/e (the total dissipated mass
is exp(-int psi) = 1/e regardless of the mollifier shape).

Run:  python demos/07_delta_dissipation.py
"""

import numpy as np

from singwave.assembly import delta_model_transfer, reflection_matrix
from singwave.mat2 import mnorm

e = np.e
target = (1.0 / (2.0 * e)) * np.array([[1 + e, 1 - e], [1 - e, 1 + e]])
print("closed-form limit:")
print(np.round(target, 6))
print("equals reflection_matrix(1/e):",
      mnorm(reflection_matrix(1.0 / e) - target) < 1e-15)

print("\nconvergence of the integrated transfer (|xi| = 1):")
for eps in (1e-1, 1e-2, 1e-3):
    mat = delta_model_transfer(eps, 1.0)
    print(f"  eps={eps:g}: ||transfer - limit|| = {mnorm(mat - target):.3e}")

print("\nzero-frequency decoupling is exact:")
mat0 = delta_model_transfer(1e-3, 0.0)
print(f"  ||transfer(xi=0) - limit|| = {mnorm(mat0 - target):.3e}")
