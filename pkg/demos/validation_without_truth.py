"""
Checking an estimate when no ground truth exists
================================================

For a cocycle from data there is nothing to compare against.  Two properties
are still testable:

* equivariance: pushing the estimate at time 0 forward ``m`` steps should land
  on the estimate recomputed at time ``m``;
* expansion rate: ``(1/m) log |A(0, m) w|`` should settle at ``lambda_2``,
  not drift up to ``lambda_1``.
"""

import numpy as np

from oseledets import compute, equivariance_defect, expansion_rate_series, qr_lyapunov, random_window

# i.i.d. Gaussian 3x3 matrices: almost surely invertible, exponents unknown
window = random_window(3, 800, seed=0)
lam = qr_lyapunov(window, 3).lambdas
print("QR exponent estimates:", np.round(lam, 4))

N = 100
ms = (10, 25, 50, 75, 100, 150, 200)
print("\nmethod    max defect   rate at m = " + "  ".join(f"{m:6d}" for m in ms))
for method in ("svd2", "ginelli2", "wolfe"):
    eq = equivariance_defect(window, lambda t, m=method: compute(m, window, N, 2, at=t), 20)
    rate = expansion_rate_series(window, compute(method, window, N, 2), 200).values
    print(f"{method:9s} {eq.values.max():9.1e}   " + "  ".join(f"{rate[m - 1]:6.3f}" for m in ms))

# %%
# The rates hover near lambda_2 and then climb toward lambda_1 after roughly
# 100 steps.  That is not a defect of the estimates: forward propagation in
# floating point picks up rounding along the dominant direction, which then
# grows like exp(m (lambda_1 - lambda_2)) and takes over once that factor
# reaches ~1e16.  The expansion test is only meaningful for
# m < log(1e16) / (lambda_1 - lambda_2).
print(f"\ntakeover horizon ~ {np.log(1e16) / (lam[0] - lam[1]):.0f} steps")

# %%
# A deliberately wrong vector fails both tests at once: e_1 is not
# equivariant and grows at lambda_1 from the start.
bad = equivariance_defect(window, lambda t: np.array([1.0, 0.0, 0.0]), 5)
print("e_1 defects:", np.round(bad.values, 3))
print("e_1 rate at m=50:", round(expansion_rate_series(window, [1.0, 0, 0], 50).values[-1], 4))
