"""Computational tools for branched covers of the projective line with prescribed monodromy."""

__version__ = "0.1.0"
