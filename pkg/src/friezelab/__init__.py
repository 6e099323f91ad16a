"""friezelab: exact cluster variables for affine type-D quivers via SL2-tilings."""

from friezelab.exactalg import (
    Monomial,
    Polynomial,
    RationalFunction,
    evaluate,
    laurent_decompose,
    parse_polynomial,
    parse_rational,
    poly_gcd,
    poly_sqrt,
    rf_arith,
    rf_canonicalize,
)
from friezelab.errors import FriezelabError, InputError, MathematicalInconsistencyError

__all__ = [
    "Monomial",
    "Polynomial",
    "RationalFunction",
    "evaluate",
    "laurent_decompose",
    "parse_polynomial",
    "parse_rational",
    "poly_gcd",
    "poly_sqrt",
    "rf_arith",
    "rf_canonicalize",
    "FriezelabError",
    "InputError",
    "MathematicalInconsistencyError",
]

__version__ = "0.1.0"
