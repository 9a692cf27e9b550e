"""
Stationary Lyapunov basis plus backward power iteration on the triangular
cocycle (Ginelli-style covariant vectors).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as linalg

from .core import (
    TINY,
    CocycleWindow,
    OrthonormalFrame,
    OseledetsError,
    SubspaceApprox,
    fix_sign,
    left_singular_frame,
    positive_qr,
    scaled_product,
)


class BasisCollapse(OseledetsError):
    pass


@dataclass(frozen=True)
class RCocycle:
    """Upper-triangular factors ``R_n`` in time order."""

    factors: np.ndarray

    @property
    def j(self) -> int:
        return self.factors.shape[1]

    def __len__(self):
        return self.factors.shape[0]


def push_forward_qr(window: CocycleWindow, start: int, steps: int, q0, keep_factors: bool = True):
    """Iterate ``Q_{n+1} R_n = A_n Q_n`` for ``n = start..start+steps-1``.

    Returns the final frame and, when ``keep_factors`` is set, the ``R_n``
    (positive diagonals) in time order.
    """
    window.require(start, start + steps - 1, "push_forward_qr")
    q = np.asarray(q0, dtype=float)
    if q.ndim == 1:
        q = q[:, None]
    j = q.shape[1]
    factors = np.empty((steps if keep_factors else 0, j, j))
    mats = window.matrices
    i0 = start - window.start
    for t in range(steps):
        q, r = positive_qr(mats[i0 + t] @ q)
        if np.min(np.diag(r)) < TINY:
            raise BasisCollapse(f"basis collapse at step {start + t}")
        if keep_factors:
            factors[t] = r
    return OrthonormalFrame(q), RCocycle(factors)


def backward_coefficients(rc: RCocycle, c_init) -> np.ndarray:
    """Power iteration with the inverse cocycle, latest factor first."""
    c = np.asarray(c_init, dtype=float)
    c = c / np.linalg.norm(c)
    for i in range(len(rc) - 1, -1, -1):
        r = rc.factors[i]
        if np.min(np.abs(np.diag(r))) <= 0:
            raise OseledetsError(f"singular factor at index {i}")
        c = linalg.solve_triangular(r, c, lower=False)
        c = c / np.linalg.norm(c)
    return c


def _default_c(j):
    c = np.zeros(j)
    c[-1] = 1.0
    return c


def _finish(window, q_x, N, j, c_init, at, method, half_width, info):
    _, rc = push_forward_qr(window, at, N, q_x)
    c = backward_coefficients(rc, _default_c(j) if c_init is None else c_init)
    w = q_x.columns @ c
    return SubspaceApprox(j, at, fix_sign(w / np.linalg.norm(w)), method, half_width, (), info)


def ginelli(window: CocycleWindow, M: int, N: int, j: int, c_init=None, seed: int = 0,
            at: int = 0) -> SubspaceApprox:
    """Random orthonormal frame at ``at - M`` pushed forward to ``at``, then
    inverse iteration over the next ``N`` triangular factors."""
    window.require(at - M, at + N - 1, "ginelli")
    rng = np.random.default_rng(seed)
    q0, _ = positive_qr(rng.random((window.dim, j)))
    q_x, _ = push_forward_qr(window, at - M, M, q0, keep_factors=False)
    return _finish(window, q_x, N, j, c_init, at, "ginelli", N, {"M": M})


def ginelli_improved(window: CocycleWindow, M: int, M_prime: int, N: int, j: int, c_init=None,
                     at: int = 0) -> SubspaceApprox:
    """As :func:`ginelli`, but the starting frame is the top ``j`` left
    singular vectors of the ``M_prime``-step product from ``at - M``."""
    if not 0 < M_prime <= M:
        raise ValueError("need 0 < M_prime <= M")
    window.require(at - M, at + N - 1, "ginelli_improved")
    q_x = stationary_basis(window, M, M_prime, j, at)
    return _finish(window, q_x, N, j, c_init, at, "ginelli2", N, {"M": M, "M_prime": M_prime})


def stationary_basis(window: CocycleWindow, M: int, M_prime: int, j: int, at: int = 0) -> OrthonormalFrame:
    """Approximate stationary Lyapunov basis at ``at`` from a singular-vector
    start at ``at - M + M_prime`` and a QR push over the remaining steps."""
    s0 = left_singular_frame(scaled_product(window, at - M, M_prime), j)
    if M == M_prime:
        return OrthonormalFrame(s0.columns)
    q, _ = push_forward_qr(window, at - M + M_prime, M - M_prime, s0.columns, keep_factors=False)
    return q
