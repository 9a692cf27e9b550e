"""
Convergence on a cocycle with known answers
===========================================

The exact model builds ``A_n = S_n R S_{n-1}^{-1}`` so that the columns of
``S_{n-1}`` *are* the Oseledets vectors at time ``n``.  That lets us measure
the error of every estimator directly as the data half-width ``N`` grows.
"""

import numpy as np

from oseledets import compute, estimate_shifts, exact_error, exact_vector, generate, reference_spec

# d = 8, exponents log 8 .. log 1, eps = 0.1, data on [-350, 349]
window, truth = generate(reference_spec(350, seed=1))
w2 = exact_vector(truth, 0, 2)

# the dichotomy methods need two shifts around lambda_2; estimate them once
shifts = estimate_shifts(window)
print(f"shifts: {shifts.lambda_left:.4f} < log 7 = {np.log(7):.4f} < {shifts.lambda_right:.4f}\n")

methods = ("svd2", "dich-intersect", "dich-project", "ginelli", "ginelli2", "wolfe")
print("   N  " + "".join(f"{m:>15}" for m in methods))
for N in (25, 50, 100, 150, 200, 300):
    errs = [exact_error(compute(m, window, N, 2, shifts=shifts), w2) for m in methods]
    print(f"{N:4d}  " + "".join(f"{e:15.2e}" for e in errs))

# %%
# The error falls roughly like exp(-N (log 8 - log 7)) until it reaches
# rounding level.  Raw ``ginelli`` starts from a random frame and its small-N
# errors jump around; ``ginelli2`` starts from singular vectors and is smoother.
