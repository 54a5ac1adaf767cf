"""Exact combinatorics for the single-deletion, two-substitution channel."""

__version__ = "0.1.0"
