"""Variably scaled kernel interpolation with scaling functions learned by
discontinuous neural networks."""

from .kernels import Family, KernelSpec, NodeSet, augment, gram, rbf_eval
from .interp import (ConstantScaling, CallableScaling, Interpolant, ScatteredData,
                     TabulatedScaling, bound_check, cardinal_values, evaluate, fit,
                     lebesgue_profile, native_norm_sq)
from .numerics import spd_solve

__version__ = "0.1.0"

__all__ = [
    "Family", "KernelSpec", "NodeSet", "augment", "gram", "rbf_eval",
    "ConstantScaling", "CallableScaling", "Interpolant", "ScatteredData", "TabulatedScaling",
    "bound_check", "cardinal_values", "evaluate", "fit", "lebesgue_profile", "native_norm_sq",
    "spd_solve",
]
