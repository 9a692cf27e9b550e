"""
Dichotomy-projector estimates of the second Oseledets vector.

Bounded solutions of the impulsively forced, shifted recursion

    w_{n+1} = exp(-shift) A_n w_n + delta_{n,-1} r

are approximated by the minimum-norm solution of the finite block system
``B w = r`` on ``n = -N..N-1``.  The minimum-norm solution is
``w = B^T y`` with ``(B B^T) y = r``; ``B B^T`` is symmetric positive definite
and block tridiagonal, so a banded Cholesky factorization does the work.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as linalg
import scipy.sparse as sp

from .core import (
    CocycleWindow,
    OseledetsError,
    SubspaceApprox,
    fix_sign,
    normalize,
)
from .spectrum import DichotomyShifts


class RankDeficientSystem(OseledetsError):
    pass


class DegenerateSpan(OseledetsError):
    pass


@dataclass(frozen=True)
class ShiftedBlockSystem:
    """Block bidiagonal constraint matrix of the shifted recursion.

    Block row ``n`` (``n = first..first+rows-1``) holds ``-exp(-shift) A_n``
    in block column ``n`` and the identity in block column ``n + 1``.
    """

    matrix: sp.csr_matrix
    dim: int
    first: int
    blocks: int
    shift: float

    @property
    def times(self) -> np.ndarray:
        """Times of the unknowns, ``first..first+blocks``."""
        return np.arange(self.first, self.first + self.blocks + 1)

    def row_block(self, n: int) -> int:
        k = n - self.first
        if not 0 <= k < self.blocks:
            raise ValueError(f"time {n} has no constraint row")
        return k


def _bidiagonal(mats: np.ndarray, shift: float) -> sp.csr_matrix:
    L, d, _ = mats.shape
    diag = sp.block_diag(list(-np.exp(-shift) * mats), format="csr")
    lower = sp.hstack([diag, sp.csr_matrix((L * d, d))])
    upper = sp.hstack([sp.csr_matrix((L * d, d)), sp.identity(L * d)])
    return (lower + upper).tocsr()


def build_system(window: CocycleWindow, N: int, shift: float, at: int = 0) -> ShiftedBlockSystem:
    """Constraint matrix over ``n = at-N .. at+N-1``, size ``2dN x d(2N+1)``."""
    if N < 1:
        raise ValueError("N must be positive")
    window.require(at - N, at + N - 1, "build_system")
    mats = window.sub(at - N, at + N - 1).matrices
    return ShiftedBlockSystem(_bidiagonal(mats, shift), window.dim, at - N, 2 * N, float(shift))


def _banded_upper(m: sp.spmatrix, bw: int) -> np.ndarray:
    m = m.tocoo()
    n = m.shape[0]
    ab = np.zeros((bw + 1, n))
    keep = (m.col >= m.row) & (m.col - m.row <= bw)
    ab[bw + m.row[keep] - m.col[keep], m.col[keep]] = m.data[keep]
    return ab


def _min_norm(b: sp.csr_matrix, rhs: np.ndarray, bw: int, fallback: bool = True) -> np.ndarray:
    """Minimum 2-norm solution of ``b x = rhs`` through the normal equations.

    ``bw`` bounds the bandwidth of ``b b^T``.  If the banded Cholesky breaks
    down, a dense QR of ``b^T`` is tried when ``fallback`` is set.
    """
    bbt = (b @ b.T).tocsr()
    try:
        cf = linalg.cholesky_banded(_banded_upper(bbt, bw), lower=False)
        y = linalg.cho_solve_banded((cf, False), rhs)
    except linalg.LinAlgError:
        if not fallback:
            raise RankDeficientSystem("system rank-deficient: Cholesky breakdown") from None
        q, r = linalg.qr(b.T.toarray(), mode="economic")
        dr = np.abs(np.diag(r))
        if dr.min() <= 1e-13 * dr.max():
            raise RankDeficientSystem("system rank-deficient") from None
        return q @ linalg.solve_triangular(r, rhs, trans="T")
    return b.T @ y


def min_norm_impulse_solve(system: ShiftedBlockSystem, impulse_time: int, impulse, fallback: bool = True):
    """Minimum-norm solution of ``B w = r`` with ``r`` one impulse block.

    Returns
    -------
    ndarray, shape (2N + 1, d)
        ``w_n`` for ``n`` in ``system.times``.
    """
    d = system.dim
    rhs = np.zeros(system.matrix.shape[0])
    k = system.row_block(impulse_time)
    rhs[k * d : (k + 1) * d] = impulse
    if not np.any(rhs):
        return np.zeros((system.blocks + 1, d))
    w = _min_norm(system.matrix, rhs, 2 * d - 1, fallback)
    return w.reshape(system.blocks + 1, d)


def _impulse_images(window, N, shift, impulses, at, fallback):
    """``A_{at-1} w_{at-1}`` for each impulse applied at ``at - 1``."""
    system = build_system(window, N, shift, at)
    a_prev = window[at - 1]
    out = []
    for r in impulses:
        w = min_norm_impulse_solve(system, at - 1, r, fallback)
        out.append(a_prev @ w[N - 1])
    return out


def w2_intersection(window: CocycleWindow, N: int, shifts: DichotomyShifts, seed: int = 0,
                    at: int = 0, fallback: bool = True) -> SubspaceApprox:
    """Intersect the unstable range for the lower shift with the stable range
    for the upper shift.

    Two random impulses give a basis ``p1, p2`` of the two-dimensional range of
    the unstable projector at ``at`` (lower shift).  A second least-squares
    problem then finds the bounded forward solution under the upper shift whose
    initial value lies in ``span(p1, p2)``.
    """
    window.require(at - N, at + N - 1, "w2_intersection")
    d = window.dim
    rng = np.random.default_rng(seed)
    r1, r2 = rng.random(d), rng.random(d)
    p1, p2 = (normalize(p) for p in _impulse_images(window, N, shifts.lambda_left, (r1, r2), at, fallback))
    if abs(p1 @ p2) > 1 - 1e-10:
        raise DegenerateSpan("degenerate span: p1 and p2 are parallel")

    # unknowns (w_0..w_N, kappa); anchor rows first keep B B^T banded
    fwd = _bidiagonal(window.sub(at, at + N - 1).matrices, shifts.lambda_right)
    anchor = sp.hstack([sp.identity(d), sp.csr_matrix((d, N * d)), sp.csr_matrix(p1[:, None])])
    body = sp.hstack([fwd, sp.csr_matrix((N * d, 1))])
    b = sp.vstack([anchor, body]).tocsr()
    rhs = np.zeros(b.shape[0])
    rhs[:d] = -p2
    sol = _min_norm(b, rhs, 2 * d - 1, fallback)
    w0 = normalize(sol[:d])
    return SubspaceApprox(2, at, fix_sign(w0), "dich-intersect", N, (),
                          {"kappa": float(sol[-1]), "lambda_left": shifts.lambda_left,
                           "lambda_right": shifts.lambda_right})


def w2_projection(window: CocycleWindow, N: int, shifts: DichotomyShifts, seed: int = 0,
                  at: int = 0, fallback: bool = True) -> SubspaceApprox:
    """Apply the unstable projector (lower shift) and then the stable projector
    (upper shift) to a random vector."""
    window.require(at - N, at + N - 1, "w2_projection")
    rng = np.random.default_rng(seed)
    r = rng.random(window.dim)
    (r_prime,) = _impulse_images(window, N, shifts.lambda_left, (r,), at, fallback)
    if not np.linalg.norm(r_prime) > 0:
        raise OseledetsError("r' annihilated")
    system = build_system(window, N, shifts.lambda_right, at)
    w = min_norm_impulse_solve(system, at - 1, r_prime, fallback)
    w0 = normalize(w[N])
    return SubspaceApprox(2, at, fix_sign(w0), "dich-project", N, (),
                          {"lambda_left": shifts.lambda_left, "lambda_right": shifts.lambda_right})
