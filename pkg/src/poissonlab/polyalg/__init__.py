from .poly import (
    ContextMismatch,
    MissingParameter,
    Poly,
    VarContext,
    partial_derivative,
    poly_arith,
    poly_sum,
    specialize,
)
from .groebner import (
    IdealGB,
    UnspecializedParameters,
    buchberger,
    ideal_membership,
    krull_dimension,
    module_membership,
    normal_form,
)
from .extra import solve_rational_system, squarefree_check

__all__ = [
    "ContextMismatch",
    "IdealGB",
    "MissingParameter",
    "Poly",
    "UnspecializedParameters",
    "VarContext",
    "buchberger",
    "ideal_membership",
    "krull_dimension",
    "module_membership",
    "normal_form",
    "partial_derivative",
    "poly_arith",
    "poly_sum",
    "solve_rational_system",
    "specialize",
    "squarefree_check",
]
