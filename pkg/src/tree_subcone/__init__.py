"""Tree Subcone - computable functional real trees at infinity of the hyperbolic plane."""

__version__ = "0.1.0"
