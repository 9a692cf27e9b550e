"""
Oseledets vector as the intersection of the span of the stationary Lyapunov
basis with the orthogonal complement of the leading singular directions of
the forward product (Wolfe-Samelson style, improved initialisation).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as linalg

from .core import (
    CocycleWindow,
    OrthonormalFrame,
    OseledetsError,
    SubspaceApprox,
    fix_sign,
    right_singular_frame,
    scaled_product,
)
from .ginelli import stationary_basis


class AmbiguousNullSpace(OseledetsError):
    pass


@dataclass(frozen=True)
class IntersectionSystem:
    D: np.ndarray
    s_frame: np.ndarray
    u_frame: np.ndarray


def build_intersection_system(s_frame, u_frame) -> IntersectionSystem:
    s = np.asarray(s_frame, dtype=float)
    u = np.asarray(u_frame, dtype=float)
    if u.ndim == 1:
        u = u[:, None]
    if s.shape[0] != u.shape[0] or u.shape[1] != s.shape[1] - 1:
        raise ValueError("need a d x j s-frame and a d x (j-1) u-frame")
    g = u.T @ s
    return IntersectionSystem(g.T @ g, s, u)


def null_vector(system: IntersectionSystem, max_ratio: float = 0.5) -> np.ndarray:
    """Right singular vector of ``D`` for its smallest singular value."""
    _, sv, vt = linalg.svd(system.D)
    if len(sv) > 1 and not sv[-1] < max_ratio * sv[-2]:
        raise AmbiguousNullSpace(
            f"ambiguous null space: singular values {sv[-2]:.3g}, {sv[-1]:.3g}"
        )
    return fix_sign(vt[-1])


def wolfe(window: CocycleWindow, M1: int, M1_prime: int, M2: int, j: int, at: int = 0) -> SubspaceApprox:
    if j < 2:
        raise ValueError("wolfe needs j >= 2")
    if not 0 < M1_prime <= M1:
        raise ValueError("need 0 < M1_prime <= M1")
    window.require(at - M1, at + M2 - 1, "wolfe")
    s = stationary_basis(window, M1, M1_prime, j, at)
    u = right_singular_frame(scaled_product(window, at, M2), j - 1)
    system = build_intersection_system(s.columns, u.columns)
    y = null_vector(system)
    w = s.columns @ y
    warnings = ("degenerate tail",) if u.degenerate_tail else ()
    return SubspaceApprox(j, at, fix_sign(w / np.linalg.norm(w)), "wolfe", M1, warnings,
                          {"M1": M1, "M1_prime": M1_prime, "M2": M2})
