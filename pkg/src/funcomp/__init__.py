"""Zero-error distributed compression of vector-linear functions."""

__version__ = "0.1.0"
