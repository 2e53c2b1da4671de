"""Exact computations with non-local Poisson vertex algebras and their logarithmic quantizations."""

__version__ = "0.1.0"
