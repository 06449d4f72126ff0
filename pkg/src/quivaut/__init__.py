"""Exact computations with trans-data of quivers and automorphisms of path coalgebras."""

__version__ = "0.1.0"
