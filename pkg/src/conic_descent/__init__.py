"""Exact 2-descent for norm-one tori and integral points on conic pencils."""
from .arith import (
    INF, PlaceSet, SquareClass, factorize, hilbert, legendre, local_conic_soluble,
    square_class, valuation,
)
from .descent import NormOneTorus, SelmerReport, selmer_group, strict_weak_selmer
from .torsor import ConicTorsor, SolveResult, adelic_report, hasse_certificate, solve

__version__ = "0.1.0"

__all__ = [
    "INF", "PlaceSet", "SquareClass", "factorize", "hilbert", "legendre",
    "local_conic_soluble", "square_class", "valuation", "NormOneTorus", "SelmerReport",
    "selmer_group", "strict_weak_selmer", "ConicTorsor", "SolveResult", "adelic_report",
    "hasse_certificate", "solve",
]
