"""Exact symbolic toolkit for Tjurina transforms of determinantal singularities."""

from .polycore import Polynomial, VarSet, evaluate, parse_poly, partial_derivative, substitute

__all__ = ["Polynomial", "VarSet", "evaluate", "parse_poly", "partial_derivative", "substitute"]
__version__ = "0.1.0"
