"""Exact off-shell Bethe vectors for the quantum affine algebra of gl_N."""

from .combinat import TypedVariables, enumerate_admissible
from .representations import Module, parse_recipe, tensor_module, vector_module, verma2_module
from .rmatrix import Variant, build_r
from .scalars import ScalarContext
from .weightfn import Method, WeightResult, compute_weight

__version__ = "0.1.0"

__all__ = [
    "Method",
    "Module",
    "ScalarContext",
    "TypedVariables",
    "Variant",
    "WeightResult",
    "build_r",
    "compute_weight",
    "enumerate_admissible",
    "parse_recipe",
    "tensor_module",
    "vector_module",
    "verma2_module",
    "__version__",
]
