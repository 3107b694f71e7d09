"""Exact differential-field arithmetic over Q(2^(1/6), sqrt 3)."""

from .algebraic import ONE, ROOT2_6, SQRT3, AlgebraicConstant, cbrt2, sqrt2, sqrt6
from .scalar import (
    COORDINATES,
    GENERATORS,
    M_COORDINATES,
    PARAMETERS,
    PoleError,
    Scalar,
    as_scalars,
    exp_generator,
    function,
    gens,
    jet,
    symbol,
)
from .serialize import from_json, normalize, to_json, to_latex, to_text

__all__ = [
    "AlgebraicConstant",
    "COORDINATES",
    "GENERATORS",
    "M_COORDINATES",
    "ONE",
    "PARAMETERS",
    "PoleError",
    "ROOT2_6",
    "SQRT3",
    "Scalar",
    "as_scalars",
    "cbrt2",
    "exp_generator",
    "from_json",
    "function",
    "gens",
    "jet",
    "normalize",
    "sqrt2",
    "sqrt6",
    "symbol",
    "to_json",
    "to_latex",
    "to_text",
]
