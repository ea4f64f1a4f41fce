"""Integrability analysis of Pfaffian forms."""

__version__ = "0.1.0"
