"""Rational univariate representations of zero-dimensional polynomial
systems, read off bivariate lexicographic Groebner bases."""

__version__ = "0.1.0"

from .errors import RurError
from .fields import QQ, PrimeField
from .groebner import buchberger, quotient_structure
from .modular import ModularConfig, drive
from .mpoly import PolyRing, parse_system
from .rur import (
    ReducedRUR,
    full_ideal_rur,
    las_vegas_radical_rur,
    radical_rur_candidate,
    strategy_certified,
)

__all__ = [
    "QQ", "PrimeField", "PolyRing", "parse_system", "buchberger", "quotient_structure",
    "ReducedRUR", "radical_rur_candidate", "las_vegas_radical_rur", "full_ideal_rur",
    "strategy_certified", "ModularConfig", "drive", "RurError", "__version__",
]
