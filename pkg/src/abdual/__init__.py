"""Abduction over well-founded semantics with explicit negation."""

__version__ = "0.1.0"
