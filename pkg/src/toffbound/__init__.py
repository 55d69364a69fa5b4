"""Entanglement-based lower bounds on Toffoli counts of reversible circuits."""

__version__ = "0.1.0"
