"""
Singular-vector push-forward estimates of Oseledets vectors.

``svd_basic`` takes the j-th right singular vector of an M-step product that
starts N steps in the past and pushes it forward to the base time.  Errors in
that vector along faster directions grow during the push, so for ``j >= 2``
``svd_improved`` periodically projects the pushed vector back onto the
orthogonal complement of the leading singular directions.  Both become less
reliable for ``j >= 3`` since the trailing singular vectors of long products
are resolved poorly in double precision; no correction is attempted.
"""

from __future__ import annotations

import numpy as np

from .core import (
    CocycleWindow,
    SubspaceApprox,
    fix_sign,
    project_out,
    propagate,
    right_singular_frame,
    scaled_product,
)


def default_schedule(N: int, stride: int = 5) -> list[int]:
    """Checkpoints ``N, N - stride, ...`` down to ``0``."""
    if N < 0:
        raise ValueError("N must be non-negative")
    return list(range(N, 0, -stride)) + [0]


def check_schedule(schedule) -> list[int]:
    s = [int(x) for x in schedule]
    if not s or s[-1] != 0:
        raise ValueError("checkpoint schedule must end with 0")
    if any(a <= b for a, b in zip(s, s[1:])):
        raise ValueError("checkpoint schedule must be strictly decreasing")
    return s


def svd_basic(window: CocycleWindow, M: int, N: int, j: int, at: int = 0) -> SubspaceApprox:
    """Push the j-th right singular vector of ``A(at - N, M)`` forward N steps."""
    window.require(at - N, at - N + M - 1, "svd_basic")
    frame = right_singular_frame(scaled_product(window, at - N, M), j)
    w, _ = propagate(window, at - N, N, frame.columns[:, j - 1])
    warnings = ("degenerate tail",) if frame.degenerate_tail else ()
    return SubspaceApprox(j, at, fix_sign(w), "svd", N, warnings, {"M": M})


def svd_improved(window: CocycleWindow, M: int, schedule, j: int, at: int = 0) -> SubspaceApprox:
    """Push-forward with re-orthogonalisation at each checkpoint.

    Parameters
    ----------
    window : CocycleWindow
    M : int
        Length of the products whose right singular vectors are used.
    schedule : sequence of int
        Distances into the past ``N_1 > N_2 > ... > 0`` at which the pushed
        vector is projected onto the complement of the leading ``j - 1``
        singular directions.
    j : int
        Index of the Oseledets vector.
    at : int
        Base time.
    """
    schedule = check_schedule(schedule)
    n1 = schedule[0]
    window.require(at - n1, at + max(M - 1, -1), "svd_improved")
    warnings = set()

    first = right_singular_frame(scaled_product(window, at - n1, M), j)
    warnings.update(["degenerate tail"] if first.degenerate_tail else [])
    w = first.columns[:, j - 1]
    if j == 1:
        # nothing to project against; one uninterrupted push
        schedule = [n1, 0]
    for prev, nk in zip(schedule, schedule[1:]):
        w, _ = propagate(window, at - prev, prev - nk, w)
        if j > 1:
            frame = right_singular_frame(scaled_product(window, at - nk, M), j - 1)
            if frame.degenerate_tail:
                warnings.add("degenerate tail")
            try:
                w = project_out(w, frame.columns)
            except Exception as exc:
                raise type(exc)(f"{exc} at checkpoint N_k={nk}") from exc
    return SubspaceApprox(
        j, at, fix_sign(w), "svd2", n1, tuple(sorted(warnings)), {"M": M, "checkpoints": len(schedule)}
    )
