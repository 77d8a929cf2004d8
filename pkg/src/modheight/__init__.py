"""Arithmetic heights of quaternionic Shimura curves: evaluators and identity checks."""

__version__ = "0.1.0"
