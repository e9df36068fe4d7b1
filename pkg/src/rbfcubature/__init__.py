"""Cubature rules built on radial basis function interpolants."""
from .cubature import (
    CubatureRule,
    RBFSpace,
    StabilityReport,
    compute_weights,
    eval_cardinals,
    is_stable_weights,
    lebesgue_estimate,
    stability_report,
)
from .kernels import Kernel, kernel_eval, min_poly_degree, parse_kernel
from .moments import MomentVector, rbf_moments, shape_parameters
from .pointsets import PointSet, Rectangle, make_pointset
from .testfns import GenzFunction, NoiseSpec, add_noise, genz_exact, runge_normalized

__all__ = [
    "CubatureRule", "RBFSpace", "StabilityReport", "compute_weights", "eval_cardinals",
    "is_stable_weights", "lebesgue_estimate", "stability_report", "Kernel", "kernel_eval",
    "min_poly_degree", "parse_kernel", "MomentVector", "rbf_moments", "shape_parameters",
    "PointSet", "Rectangle", "make_pointset", "GenzFunction", "NoiseSpec", "add_noise",
    "genz_exact", "runge_normalized",
]
