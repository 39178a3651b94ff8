"""Selmer-order surveys over quadratic twist families via theta series."""

__version__ = "0.1.0"
