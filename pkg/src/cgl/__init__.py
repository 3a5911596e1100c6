"""Galois actions on rational plane curves through rational points, at desk scale."""

__version__ = "0.1.0"
