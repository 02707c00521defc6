"""Numerical demonstrations that a qubit's (theta, phi) information cannot be split."""

__version__ = "0.1.0"
