"""Certified enclosures of the numerical radius ``w(T)`` and the Euclidean
operator radius ``w_e(B, C)``, a registry of closed-form bounds on both, and a
harness that checks the bounds on random ensembles."""
from .bounds import (BoundInfo, BoundResult, Context, applicable_ids, evaluate, evaluate_many,
                     list_bounds, reference)
from .errors import (ConvergenceFailure, DimensionMismatch, InvalidMatrix, InvalidSpec,
                     InvalidTolerance, IOFailure, NoConvergence, NotApplicable, NotHermitian,
                     NotPSD, OpRadiusError, ParameterOutOfRange, WrongInputShape)
from .kernels import BACKEND
from .matcore import (ScalarFunctionSpec, abs_operator, cmatrix, hermitian_eig, psd_function,
                      segment_integral, segment_power_integral, spectral_norm, svd)
from .radii import Enclosure, euclidean_radius, numerical_radius, we_oracle, w_oracle
from .transforms import PolarParts, aluthge_t, cartesian, offdiag_block, polar

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "BoundInfo", "BoundResult", "Context", "ConvergenceFailure", "DimensionMismatch",
    "Enclosure", "IOFailure", "InvalidMatrix", "InvalidSpec", "InvalidTolerance", "NoConvergence",
    "NotApplicable", "NotHermitian", "NotPSD", "OpRadiusError", "ParameterOutOfRange", "PolarParts",
    "ScalarFunctionSpec", "WrongInputShape", "abs_operator", "aluthge_t", "applicable_ids",
    "cartesian", "cmatrix", "euclidean_radius", "evaluate", "evaluate_many", "hermitian_eig",
    "list_bounds", "numerical_radius", "offdiag_block", "polar", "psd_function", "reference",
    "segment_integral", "segment_power_integral", "spectral_norm", "svd", "w_oracle", "we_oracle",
]
