"""Exact Fitting invariants over commutative rings, local group rings and Morita orders."""

__version__ = "0.1.0"
