"""Mechanical checks of the geodesic Norine conjecture on small hypercubes."""

__version__ = "0.1.0"
