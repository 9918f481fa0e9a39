"""Exact Weingarten calculus for U(N), O(N), Sp(N) and the circular ensembles."""

__version__ = "0.1.0"
