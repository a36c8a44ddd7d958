"""derivscan: exact bounded-degree evidence about simple derivations."""

__version__ = "0.1.0"

from .poly import MINUS_INFINITY, ArityError, ParseError, Polynomial, parse, to_string
from .derivation import (
    Derivation,
    FamilyParams,
    jordan_derivation,
    permute_variables,
    two_variable_derivation,
)

__all__ = [
    "MINUS_INFINITY",
    "ArityError",
    "ParseError",
    "Polynomial",
    "parse",
    "to_string",
    "Derivation",
    "FamilyParams",
    "jordan_derivation",
    "permute_variables",
    "two_variable_derivation",
    "__version__",
]
