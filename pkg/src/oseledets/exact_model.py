"""
A cocycle with known Oseledets subspaces.

``A_n = S_n R S_{n-1}^{-1}`` with ``R = diag(exp(lambda_i))``.  Then
``A_n S_{n-1} = S_n R``, so column ``j`` of ``S_{n-1}`` is mapped onto a
multiple of column ``j`` of ``S_n``: the columns of ``S_{n-1}`` span the
Oseledets subspaces at time ``n``.  ``S_n = I + eps Z_n`` except at
``n = -1`` where ``S_{-1}`` is unit lower bidiagonal with random subdiagonal.

Random stream (numpy PCG64 seeded with ``seed``): the ``Z_n`` for
``n = -N-1, ..., N-1`` (skipping ``-1``) in increasing time, each ``d*d``
uniform draws in row-major order, then ``z_2..z_d``.  A rejected ``Z_n``
(condition number above 1e8) is replaced by the next ``d*d`` draws.
With ``fresh_z=False`` a single ``Z`` is drawn and reused.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import CocycleWindow, OseledetsError, fix_sign

COND_LIMIT = 1e8
MAX_RETRIES = 10


@dataclass(frozen=True)
class ExactModelSpec:
    spectrum: tuple
    epsilon: float = 0.1
    half_width: int = 350
    seed: int = 0
    fresh_z: bool = True

    def __post_init__(self):
        spec = tuple(float(x) for x in self.spectrum)
        if len(spec) < 1 or any(a <= b for a, b in zip(spec, spec[1:])):
            raise ValueError("spectrum must be strictly decreasing")
        if not self.epsilon >= 0:
            raise ValueError("epsilon must be non-negative")
        if self.half_width < 1:
            raise ValueError("half_width must be positive")
        object.__setattr__(self, "spectrum", spec)

    @property
    def dim(self) -> int:
        return len(self.spectrum)


def log_ladder(k: int) -> tuple:
    """``(log k, log(k-1), ..., log 1)``."""
    return tuple(np.log(np.arange(k, 0, -1, dtype=float)))


def reference_spec(half_width: int = 350, seed: int = 0, **kw) -> ExactModelSpec:
    """d = 8, exponents log 8 .. log 1, eps = 0.1."""
    return ExactModelSpec(log_ladder(8), kw.pop("epsilon", 0.1), half_width, seed, **kw)


@dataclass(frozen=True)
class ExactGroundTruth:
    """``S_{n-1}`` for every time ``n`` in ``[first, last]``."""

    bases: np.ndarray
    first: int

    @property
    def last(self) -> int:
        return self.first + self.bases.shape[0] - 1

    def basis_at(self, n: int) -> np.ndarray:
        if not self.first <= n <= self.last:
            raise IndexError(f"no ground truth at time {n}")
        return self.bases[n - self.first]

    def vector(self, n: int, j: int) -> np.ndarray:
        return exact_vector(self, n, j)


def _draw_s(rng, d, eps):
    for _ in range(MAX_RETRIES + 1):
        s = np.eye(d) + eps * rng.random((d, d))
        if np.linalg.cond(s) <= COND_LIMIT:
            return s
    raise OseledetsError("could not draw a well-conditioned S_n")


def generate(spec: ExactModelSpec):
    """Cocycle window over ``[-N, N-1]`` and its exact Oseledets bases.

    Returns
    -------
    window : CocycleWindow
    truth : ExactGroundTruth
        Bases for times ``-N .. N``.
    """
    d, N = spec.dim, spec.half_width
    rng = np.random.default_rng(spec.seed)
    times = range(-N - 1, N)
    s = {}
    fixed = None
    for n in times:
        if n == -1:
            continue
        if spec.fresh_z:
            s[n] = _draw_s(rng, d, spec.epsilon)
        else:
            fixed = _draw_s(rng, d, spec.epsilon) if fixed is None else fixed
            s[n] = fixed
    s[-1] = np.eye(d) + np.diag(rng.random(d - 1), -1)

    r = np.exp(np.asarray(spec.spectrum))
    mats = np.empty((2 * N, d, d))
    for i, n in enumerate(range(-N, N)):
        # A_n = S_n R S_{n-1}^{-1}, via a solve against S_{n-1}^T
        mats[i] = np.linalg.solve(s[n - 1].T, (s[n] * r).T).T
    bases = np.stack([s[n] for n in times])
    return CocycleWindow(mats, -N), ExactGroundTruth(bases, -N)


def exact_vector(truth: ExactGroundTruth, n: int, j: int) -> np.ndarray:
    """Unit, sign-fixed column ``j`` (1-based) of ``S_{n-1}``."""
    col = truth.basis_at(n)[:, j - 1]
    return fix_sign(col / np.linalg.norm(col))


def random_window(d: int, length: int, seed: int = 0, start: int | None = None) -> CocycleWindow:
    """Cocycle of i.i.d. standard Gaussian matrices (almost surely invertible)
    centred on time 0 unless ``start`` is given."""
    rng = np.random.default_rng(seed)
    mats = rng.standard_normal((length, d, d))
    return CocycleWindow(mats, -(length // 2) if start is None else start)
