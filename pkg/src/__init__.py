"""Transition layers, fractional Laplacians and the double-well potentials they generate."""

__version__ = "0.1.0"
