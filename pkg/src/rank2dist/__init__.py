"""Projective invariants of rank-2 distributions with small growth vector (2,3,5,...)."""

__version__ = "0.1.0"
