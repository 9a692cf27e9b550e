"""
Uniform front end over all estimators.

Each method is called as ``compute(name, window, N, j, at=..., **params)``
with the default parameters used for the exact-model study:

========================  ===============================================
``svd``                   ``M = 2N``
``svd2``                  ``M = N``, checkpoints every 5 steps
``dich-intersect``        shifts from QR exponents, fraction 0.1
``dich-project``          as ``dich-intersect``
``ginelli``               ``M = N``, ``c' = (0, ..., 0, 1)``
``ginelli2``              ``M = N``, ``M' = 5``
``wolfe``                 ``M1 = M2 = N``, ``M1' = 5``
========================  ===============================================
"""

from __future__ import annotations

from .core import CocycleWindow, SubspaceApprox
from .dichotomy import w2_intersection, w2_projection
from .ginelli import ginelli, ginelli_improved
from .spectrum import DichotomyShifts, choose_shifts, qr_lyapunov
from .svd_method import default_schedule, svd_basic, svd_improved
from .wolfe import wolfe

METHODS = ("svd", "svd2", "dich-intersect", "dich-project", "ginelli", "ginelli2", "wolfe")
# methods compared in the exact-model study (raw svd/ginelli are shown separately)
STUDY_METHODS = ("svd2", "dich-intersect", "dich-project", "ginelli2", "wolfe")


def _params(method, N, p):
    p = dict(p)
    if method == "svd":
        p.setdefault("M", 2 * N)
    elif method == "svd2":
        p.setdefault("M", N)
        p.setdefault("stride", 5)
    elif method in ("ginelli", "ginelli2"):
        p.setdefault("M", N)
        if method == "ginelli2":
            p.setdefault("M_prime", min(5, p["M"]))
    elif method == "wolfe":
        p.setdefault("M1", N)
        p.setdefault("M1_prime", min(5, p["M1"]))
        p.setdefault("M2", N)
    elif method not in ("dich-intersect", "dich-project"):
        raise KeyError(f"unknown method {method!r}")
    return p


def required_range(method: str, N: int, at: int = 0, **params) -> tuple[int, int]:
    """Times ``(first, last)`` of cocycle data a method reads."""
    p = _params(method, N, params)
    if method == "svd":
        return at - N, at - N + max(p["M"], N) - 1
    if method == "svd2":
        return at - N, at + p["M"] - 1
    if method in ("ginelli", "ginelli2"):
        return at - p["M"], at + N - 1
    if method == "wolfe":
        return at - p["M1"], at + p["M2"] - 1
    return at - N, at + N - 1


def estimate_shifts(window: CocycleWindow, seed: int = 0, fraction: float = 0.1) -> DichotomyShifts:
    return choose_shifts(qr_lyapunov(window, 3, seed=seed), fraction)


def compute(method: str, window: CocycleWindow, N: int, j: int = 2, at: int = 0, seed: int = 0,
            shifts: DichotomyShifts | None = None, **params) -> SubspaceApprox:
    p = _params(method, N, params)
    lo, hi = required_range(method, N, at, **params)
    window.require(lo, hi, method)
    if method == "svd":
        return svd_basic(window, p["M"], N, j, at)
    if method == "svd2":
        return svd_improved(window, p["M"], default_schedule(N, p["stride"]), j, at)
    if method in ("dich-intersect", "dich-project"):
        if j != 2:
            raise ValueError("dichotomy methods compute j = 2 only")
        if shifts is None:
            shifts = estimate_shifts(window, seed, p.get("fraction", 0.1))
        fn = w2_intersection if method == "dich-intersect" else w2_projection
        return fn(window, N, shifts, seed=seed, at=at)
    if method == "ginelli":
        return ginelli(window, p["M"], N, j, p.get("c_init"), seed=seed, at=at)
    if method == "ginelli2":
        return ginelli_improved(window, p["M"], p["M_prime"], N, j, p.get("c_init"), at=at)
    return wolfe(window, p["M1"], p["M1_prime"], p["M2"], j, at)
