"""Digitized-counterdiabatic variational pipeline for lattice protein folding."""

__version__ = "0.1.0"
