"""
Cocycle data model, normalized propagation and frame utilities.

Every method in the package consumes a :class:`CocycleWindow`, a finite run of
d x d matrices ``A_n`` indexed by consecutive integer times.  Long products are
never formed directly; instead they are accumulated with per-step rescaling and
a separate log-scale counter (:class:`ScaledProduct`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as linalg

TINY = np.finfo(float).tiny
EPS = np.finfo(float).eps


class OseledetsError(RuntimeError):
    """Base class for numerical failures raised by the package."""


class AnnihilationError(OseledetsError):
    """A propagated or projected vector collapsed to (numerically) zero."""


class WindowRangeError(ValueError):
    """Requested times fall outside the cocycle window."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


@dataclass(frozen=True)
class CocycleWindow:
    """Matrices ``A_start, ..., A_{start+L-1}`` of a cocycle over one orbit.

    Parameters
    ----------
    matrices : array_like, shape (L, d, d)
        ``matrices[i]`` is ``A_{start+i}``.
    start : int
        Time index of the first matrix.
    """

    matrices: np.ndarray
    start: int = 0

    def __post_init__(self):
        mats = np.array(self.matrices, dtype=float, order="C")
        if mats.ndim != 3 or mats.shape[1] != mats.shape[2] or mats.shape[1] < 1:
            raise ValueError(f"expected an (L, d, d) stack, got shape {mats.shape}")
        if mats.shape[0] < 1:
            raise ValueError("a window needs at least one matrix")
        if not np.all(np.isfinite(mats)):
            raise ValueError("cocycle matrices must have finite entries")
        mats.setflags(write=False)
        object.__setattr__(self, "matrices", mats)
        object.__setattr__(self, "start", int(self.start))

    @property
    def dim(self) -> int:
        return self.matrices.shape[1]

    @property
    def length(self) -> int:
        return self.matrices.shape[0]

    @property
    def stop(self) -> int:
        """Last valid time index (inclusive)."""
        return self.start + self.length - 1

    def covers(self, first: int, last: int) -> bool:
        return last < first or (self.start <= first and last <= self.stop)

    def require(self, first: int, last: int, what: str = "operation"):
        if not self.covers(first, last):
            raise WindowRangeError(
                f"{what} needs times [{first}, {last}] but the window holds "
                f"[{self.start}, {self.stop}]",
                required=(first, last),
            )

    def __getitem__(self, n: int) -> np.ndarray:
        if not self.start <= n <= self.stop:
            raise WindowRangeError(
                f"time {n} outside window [{self.start}, {self.stop}]", required=(n, n)
            )
        return self.matrices[n - self.start]

    def sub(self, first: int, last: int) -> "CocycleWindow":
        """Sub-window holding times ``first..last``."""
        self.require(first, last, "sub-window")
        return CocycleWindow(self.matrices[first - self.start : last - self.start + 1], first)

    def scaled(self, factor: float) -> "CocycleWindow":
        return CocycleWindow(factor * self.matrices, self.start)


@dataclass(frozen=True)
class ScaledProduct:
    """Product ``exp(log_scale) * matrix`` kept at unit scale."""

    matrix: np.ndarray
    log_scale: float

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def value(self) -> np.ndarray:
        """The represented product. Overflows for long products; tests only."""
        return np.exp(self.log_scale) * self.matrix

    def then(self, other: "ScaledProduct") -> "ScaledProduct":
        """Composition: ``other`` applied after ``self``."""
        m = other.matrix @ self.matrix
        s = _scale(m)
        return ScaledProduct(m / s, self.log_scale + other.log_scale + np.log(s))


@dataclass(frozen=True)
class OrthonormalFrame:
    """d x k matrix with orthonormal columns, plus the singular values that
    produced it when it came out of an SVD."""

    columns: np.ndarray
    singular_values: np.ndarray | None = None
    degenerate_tail: bool = False

    @property
    def dim(self) -> int:
        return self.columns.shape[0]

    @property
    def k(self) -> int:
        return self.columns.shape[1]

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.columns, dtype=dtype)


@dataclass(frozen=True)
class SubspaceApprox:
    """Unit vector approximating ``w_j`` at time ``time``."""

    j: int
    time: int
    vector: np.ndarray
    method: str
    half_width: int
    warnings: tuple = field(default=())
    info: dict = field(default_factory=dict)

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=float)
        nrm = np.linalg.norm(v)
        if abs(nrm - 1.0) > 1e-12:
            v = v / nrm
        object.__setattr__(self, "vector", v)


def _scale(m: np.ndarray) -> float:
    # Frobenius / sqrt(d): same scale class as an operator-norm estimate, deterministic.
    return float(np.linalg.norm(m) / np.sqrt(m.shape[0]))


def fix_sign(v: np.ndarray) -> np.ndarray:
    """Flip ``v`` so its largest-magnitude entry is positive."""
    v = np.asarray(v, dtype=float)
    if v.ndim == 1:
        return -v if v[np.argmax(np.abs(v))] < 0 else v.copy()
    idx = np.argmax(np.abs(v), axis=0)
    signs = np.where(v[idx, np.arange(v.shape[1])] < 0, -1.0, 1.0)
    return v * signs


def normalize(v: np.ndarray) -> np.ndarray:
    nrm = np.linalg.norm(v)
    if not nrm > TINY:
        raise AnnihilationError("vector annihilated")
    return v / nrm


def propagate(window: CocycleWindow, start: int, steps: int, v):
    """Push ``v`` forward through ``A_start, ..., A_{start+steps-1}``.

    The vector is renormalized after every multiplication and the logarithms of
    the norms are summed, so arbitrarily long pushes neither overflow nor
    underflow.

    Parameters
    ----------
    window : CocycleWindow
    start : int
        Time of the first matrix applied.
    steps : int
        Number of matrices applied (0 returns the normalized input).
    v : array_like, shape (d,)

    Returns
    -------
    u : ndarray, shape (d,)
        Unit vector in the direction of ``A(start, steps) v``.
    log_growth : float
        ``log ||A(start, steps) v|| - log ||v||``.
    """
    if steps < 0:
        raise ValueError("steps must be non-negative")
    window.require(start, start + steps - 1, "propagate")
    v = np.asarray(v, dtype=float)
    nrm = np.linalg.norm(v)
    if not nrm > 0:
        raise AnnihilationError("vector annihilated: zero input")
    u = v / nrm
    log_growth = 0.0
    mats = window.matrices
    i0 = start - window.start
    for i in range(i0, i0 + steps):
        u = mats[i] @ u
        nrm = np.linalg.norm(u)
        if not nrm > TINY:
            raise AnnihilationError(f"vector annihilated at time {i + window.start}")
        u = u / nrm
        log_growth += np.log(nrm)
    return u, log_growth


def scaled_product(window: CocycleWindow, start: int, steps: int) -> ScaledProduct:
    """``A_{start+steps-1} ... A_start`` renormalized after every factor."""
    if steps < 1:
        raise ValueError("steps must be positive")
    window.require(start, start + steps - 1, "scaled_product")
    mats = window.matrices
    i0 = start - window.start
    p = np.eye(window.dim)
    log_scale = 0.0
    for i in range(i0, i0 + steps):
        p = mats[i] @ p
        s = _scale(p)
        if not s > TINY:
            raise AnnihilationError(f"product collapsed at time {i + window.start}")
        p = p / s
        log_scale += np.log(s)
    return ScaledProduct(p, log_scale)


def _degenerate(s: np.ndarray, k: int) -> bool:
    return bool(s[0] == 0 or s[k - 1] / s[0] < 1e3 * EPS)


def right_singular_frame(p: ScaledProduct, k: int) -> OrthonormalFrame:
    """Leading ``k`` right singular vectors of ``p.matrix``.

    These are the eigenvectors of ``(P^T P)^{1/2M}``, ordered by decreasing
    singular value; the fractional root itself never needs to be formed.
    """
    d = p.dim
    if not 1 <= k <= d:
        raise ValueError(f"k must be in [1, {d}]")
    _, s, vt = linalg.svd(p.matrix)
    return OrthonormalFrame(fix_sign(vt[:k].T), s[:k], _degenerate(s, k))


def left_singular_frame(p: ScaledProduct, k: int) -> OrthonormalFrame:
    """Leading ``k`` left singular vectors of ``p.matrix``."""
    d = p.dim
    if not 1 <= k <= d:
        raise ValueError(f"k must be in [1, {d}]")
    u, s, _ = linalg.svd(p.matrix)
    return OrthonormalFrame(fix_sign(u[:, :k]), s[:k], _degenerate(s, k))


def project_out(v, frame) -> np.ndarray:
    """Unit vector along the component of ``v`` orthogonal to ``frame``."""
    v = np.asarray(v, dtype=float)
    f = np.asarray(frame, dtype=float)
    if f.ndim == 1:
        f = f[:, None]
    r = v - f @ (f.T @ v)
    # second pass keeps the result orthogonal to working precision
    r = r - f @ (f.T @ r)
    nrm = np.linalg.norm(r)
    if not nrm > 1e-14 * np.linalg.norm(v):
        raise AnnihilationError("projection annihilated")
    return r / nrm


def positive_qr(m: np.ndarray):
    """Thin QR with a non-negative diagonal in ``R``."""
    q, r = linalg.qr(m, mode="economic")
    signs = np.where(np.diag(r) < 0, -1.0, 1.0)
    return q * signs, r * signs[:, None]
