"""Lattice reduction, successive minima and their bounds."""
