"""Exact computation of prime-isogenous discriminant twins over Q and quadratic fields."""

__version__ = "0.1.0"
