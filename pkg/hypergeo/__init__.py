"""Arbitrary-precision generalized hypergeometric functions, including degenerate parameters."""

__version__ = "0.1.0"
