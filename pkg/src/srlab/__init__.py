"""Exact computations for stable reduction of three-point SL_2(p)/PSL_2(p) covers."""

from .errors import CapExceeded, GoodReduction, InvalidInput, SrlabError, VerificationError

__version__ = "0.1.0"

__all__ = [
    "CapExceeded",
    "GoodReduction",
    "InvalidInput",
    "SrlabError",
    "VerificationError",
]
