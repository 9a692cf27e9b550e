"""
Accuracy checks that need no ground truth (equivariance, expansion rate) and
the direct error against a known vector.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import CocycleWindow, propagate


@dataclass(frozen=True)
class TestSeries:
    kind: str
    points: tuple = field(default=())
    note: str = ""

    __test__ = False  # keep pytest from collecting this

    @property
    def m(self) -> np.ndarray:
        return np.array([p[0] for p in self.points], dtype=int)

    @property
    def values(self) -> np.ndarray:
        return np.array([p[1] for p in self.points], dtype=float)


def exact_error(approx, truth) -> float:
    """Sign-blind Euclidean separation ``min(|v - w|, |v + w|)``."""
    v = np.asarray(getattr(approx, "vector", approx), dtype=float)
    w = np.asarray(truth, dtype=float)
    return float(min(np.linalg.norm(v - w), np.linalg.norm(v + w)))


def angle(u, v) -> float:
    """Angle between the lines spanned by ``u`` and ``v`` (radians)."""
    u = np.asarray(getattr(u, "vector", u), dtype=float)
    v = np.asarray(getattr(v, "vector", v), dtype=float)
    u = u / np.linalg.norm(u)
    v = v / np.linalg.norm(v)
    # stable for tiny angles, unlike arccos
    return float(2 * np.arcsin(min(1.0, exact_error(u, v) / 2)))


def equivariance_defect(window: CocycleWindow, approximator, m_max: int, at: int = 0,
                        required=None) -> TestSeries:
    """Compare pushed-forward and independently recomputed approximations.

    Parameters
    ----------
    window : CocycleWindow
    approximator : callable
        ``approximator(at) -> unit vector`` (or anything with ``.vector``),
        computing the approximation at base time ``at``.
    m_max : int
        Last shift; points are ``m = 0..m_max``.
    required : tuple of int, optional
        ``(first, last)`` times the approximator needs at base ``at``;
        checked up front for every shifted base point.
    """
    if required is not None:
        window.require(required[0], required[1] + m_max, "equivariance_defect")
    w0 = np.asarray(getattr(r := approximator(at), "vector", r), dtype=float)
    points = []
    pushed = w0 / np.linalg.norm(w0)
    for m in range(m_max + 1):
        if m > 0:
            pushed, _ = propagate(window, at + m - 1, 1, pushed)
        try:
            wm = approximator(at + m)
        except Exception as exc:
            return TestSeries("equivariance", tuple(points), f"approximator failed at m={m}: {exc}")
        points.append((m, exact_error(pushed, np.asarray(getattr(wm, "vector", wm)))))
    return TestSeries("equivariance", tuple(points))


def expansion_rate_series(window: CocycleWindow, w, m_max: int, at: int = 0) -> TestSeries:
    """``(1/m) log |A(at, m) w|`` for ``m = 1..m_max`` (``w`` normalized)."""
    window.require(at, at + m_max - 1, "expansion_rate_series")
    u = np.asarray(getattr(w, "vector", w), dtype=float)
    u = u / np.linalg.norm(u)
    total = 0.0
    points = []
    for m in range(1, m_max + 1):
        u, g = propagate(window, at + m - 1, 1, u)
        total += g
        points.append((m, total / m))
    return TestSeries("expansion", tuple(points))
