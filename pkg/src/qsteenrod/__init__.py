"""Mod-p quantum Steenrod operations of local P^1 and T*P^1, computed by localization."""

from .errors import QSteenrodError
from .exact_arith import BigRational, FieldElement, PrimeModulus
from .poly_series import EXACT, GF, QQ, Endo2, GradedSeries, Window

__all__ = [
    "QSteenrodError",
    "BigRational",
    "FieldElement",
    "PrimeModulus",
    "EXACT",
    "GF",
    "QQ",
    "Endo2",
    "GradedSeries",
    "Window",
]
__version__ = "0.1.0"
