"""Exact verification of L-infinity descriptions of the adjoint quotient and Hitchin maps."""

__version__ = "0.1.0"
