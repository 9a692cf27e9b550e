"""
Oseledets (covariant Lyapunov) vectors of finite matrix cocycles.

Four families of estimators are provided: singular-vector push-forward
(:mod:`.svd_method`), dichotomy projectors (:mod:`.dichotomy`), stationary
Lyapunov basis with backward iteration (:mod:`.ginelli`) and subspace
intersection (:mod:`.wolfe`).  :mod:`.exact_model` builds a test cocycle with
known answers and :mod:`.validation` holds the accuracy checks.
"""

from .core import (
    AnnihilationError,
    CocycleWindow,
    OrthonormalFrame,
    OseledetsError,
    ScaledProduct,
    SubspaceApprox,
    WindowRangeError,
    left_singular_frame,
    project_out,
    propagate,
    right_singular_frame,
    scaled_product,
)
from .dichotomy import build_system, min_norm_impulse_solve, w2_intersection, w2_projection
from .exact_model import ExactModelSpec, exact_vector, generate, reference_spec, random_window
from .ginelli import backward_coefficients, ginelli, ginelli_improved, push_forward_qr
from .methods import METHODS, compute, estimate_shifts, required_range
from .spectrum import DichotomyShifts, SpectrumEstimate, choose_shifts, qr_lyapunov
from .svd_method import default_schedule, svd_basic, svd_improved
from .validation import angle, equivariance_defect, exact_error, expansion_rate_series
from .wolfe import build_intersection_system, null_vector, wolfe

__version__ = "0.1.0"
