"""Exact moving-frame tensor calculus for G2(2) ambient metrics."""

__version__ = "0.1.0"
