"""Exact lattice and discriminant-form toolkit for BHK mirror checks of K3 surfaces."""

__version__ = "0.1.0"
