"""Exact arithmetic: polynomials and rational functions over Q, and matrices."""

from .matrix import (
    ExactMatrix,
    SingularMatrixError,
    exact_rank,
    invert_rational,
    invert_symmetric,
    pseudo_invert_gram,
)
from .poly import (
    PoleError,
    RationalFunction,
    UniPolynomial,
    evaluate,
    expand_at_infinity,
    poly_gcd,
    rational_interpolate,
    rf_normalize,
)

__all__ = [
    "ExactMatrix",
    "PoleError",
    "RationalFunction",
    "SingularMatrixError",
    "UniPolynomial",
    "evaluate",
    "exact_rank",
    "expand_at_infinity",
    "invert_rational",
    "invert_symmetric",
    "poly_gcd",
    "pseudo_invert_gram",
    "rational_interpolate",
    "rf_normalize",
]
