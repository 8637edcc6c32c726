"""Finite residuated lattices, their reticulations, co-Stone classification
and strongly co-Stone hulls."""

__version__ = "0.1.0"
