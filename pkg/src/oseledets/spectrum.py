"""
Lyapunov exponent estimates and the shift heuristic for the dichotomy methods.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CocycleWindow, OseledetsError, positive_qr


class RankDeficientStep(OseledetsError):
    pass


class UnseparatedSpectrum(ValueError):
    pass


@dataclass(frozen=True)
class SpectrumEstimate:
    lambdas: np.ndarray
    steps_used: int

    @property
    def k(self) -> int:
        return len(self.lambdas)


@dataclass(frozen=True)
class DichotomyShifts:
    lambda_left: float
    lambda_right: float

    def __post_init__(self):
        if not self.lambda_left < self.lambda_right:
            raise ValueError("lambda_left must be smaller than lambda_right")

    def shifted(self, c: float) -> "DichotomyShifts":
        return DichotomyShifts(self.lambda_left + c, self.lambda_right + c)


def qr_lyapunov(window: CocycleWindow, k: int, seed: int = 0, burn_in: int | None = None):
    """Estimate the ``k`` leading Lyapunov exponents by repeated thin QR.

    ``Q_{n+1} R_n = A_n Q_n`` is iterated over the whole window and the
    exponents are the time averages of ``log R_n[i, i]`` once the first
    ``min(L // 10, 20)`` steps have been discarded.
    """
    d, L = window.dim, window.length
    if not 1 <= k <= d:
        raise ValueError(f"k must be in [1, {d}]")
    if L < 2:
        raise ValueError("need at least two matrices")
    if burn_in is None:
        burn_in = min(L // 10, 20)
    rng = np.random.default_rng(seed)
    q, _ = positive_qr(rng.random((d, k)))
    acc = np.zeros(k)
    for i, a in enumerate(window.matrices):
        q, r = positive_qr(a @ q)
        diag = np.diag(r)
        if np.any(diag == 0):
            raise RankDeficientStep(f"rank-deficient step at time {window.start + i}")
        if i >= burn_in:
            acc += np.log(diag)
    used = L - burn_in
    lambdas = np.sort(acc / used)[::-1]
    return SpectrumEstimate(lambdas, used)


def choose_shifts(est, fraction: float = 0.1) -> DichotomyShifts:
    """Place shifts just outside the second spectral interval.

    ``lambda_left = l2 - fraction * (l2 - l3)`` and
    ``lambda_right = l2 + fraction * (l1 - l2)``.
    """
    lam = np.asarray(getattr(est, "lambdas", est), dtype=float)
    if len(lam) < 3:
        raise ValueError("need at least three exponents")
    l1, l2, l3 = lam[:3]
    if not (l1 - l2 > 1e-8 and l2 - l3 > 1e-8):
        raise UnseparatedSpectrum(f"unseparated spectrum: {l1}, {l2}, {l3}")
    return DichotomyShifts(l2 - fraction * (l2 - l3), l2 + fraction * (l1 - l2))
