"""
Choosing the dichotomy shifts
=============================

The dichotomy estimators scale the cocycle by ``exp(-shift)`` and solve for
bounded solutions.  The lower shift must lie between ``lambda_3`` and
``lambda_2`` and the upper one between ``lambda_2`` and ``lambda_1``.  The
truncation error on a window of half-width ``N`` decays at a rate set by the
distance from each shift to the neighbouring exponents.
"""

import numpy as np

from oseledets import DichotomyShifts, exact_error, exact_vector, generate, reference_spec
from oseledets import choose_shifts, qr_lyapunov, w2_projection

window, truth = generate(reference_spec(350, seed=1))
w2 = exact_vector(truth, 0, 2)

est = qr_lyapunov(window, 3)
l1, l2, l3 = est.lambdas
print("exponents:", np.round(est.lambdas, 5))

for frac in (0.02, 0.1, 0.5, 0.9):
    s = choose_shifts(est, frac)
    errs = [exact_error(w2_projection(window, N, s), w2) for N in (50, 100, 150)]
    print(f"fraction {frac:4.2f}: shifts ({s.lambda_left:.4f}, {s.lambda_right:.4f})  "
          "errors at N=50,100,150: " + "  ".join(f"{e:.1e}" for e in errs))

# %%
# Shifts outside the gaps give the wrong subspace, not a slow answer.
wrong = DichotomyShifts(l1 + 0.05, l1 + 0.1)
print("both shifts above lambda_1:", f"{exact_error(w2_projection(window, 150, wrong), w2):.2f}")
