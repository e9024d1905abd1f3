"""Exact tools for the ultradiscrete periodic Toda lattice and its tropical spectral curves."""

__version__ = "0.1.0"
