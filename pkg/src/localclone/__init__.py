"""Simulation and verification of perfect LOCC cloning with one shared
maximally entangled resource."""

__version__ = "0.1.0"
