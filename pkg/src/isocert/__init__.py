"""Verification toolkit for hypersurfaces with constant principal curvatures in S^3 x R and H^3 x R."""

__version__ = "0.1.0"
