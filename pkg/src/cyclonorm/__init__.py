"""Exact cyclotomic arithmetic and semilocal series checks for the norm
equation (x^p + y^p)/(x + y) = p^e z^p."""

__version__ = "0.1.0"
