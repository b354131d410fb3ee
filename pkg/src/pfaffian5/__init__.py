"""Pfaffian models of genus one curves of degree 5: invariants, group action and local diagnostics."""

__version__ = "0.1.0"
