"""Koszul-dual homological algebra on projective space, computed exactly."""

__version__ = "0.1.0"
