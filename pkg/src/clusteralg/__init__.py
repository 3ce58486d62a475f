"""Exact seed dynamics for cluster algebras with coefficients."""

__version__ = "0.1.0"
