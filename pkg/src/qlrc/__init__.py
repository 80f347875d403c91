"""Locally recoverable classical and quantum CSS codes with re-checkable certificates."""

__version__ = "0.1.0"
