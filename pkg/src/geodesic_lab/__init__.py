"""Desk-scale laboratory for low-lying, fundamental, reciprocal geodesics."""

__version__ = "0.1.0"
