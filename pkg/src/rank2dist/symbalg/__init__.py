"""Exact-arithmetic kernel: rational functions with auxiliary symbols, truncated series."""

from .expr import AuxDecl, Chart, Expr, Scalar, format_rational, poly_divides, squarefree_radical, to_fraction

__all__ = [
    "AuxDecl",
    "Chart",
    "Expr",
    "Scalar",
    "format_rational",
    "poly_divides",
    "squarefree_radical",
    "to_fraction",
]
