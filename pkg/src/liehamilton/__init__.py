"""Geometric models for Lie-Hamilton systems on the plane."""
__version__ = "0.1.0"
