"""Diophantine approximation invariants of split smooth projective toric varieties over Q."""

__version__ = "0.1.0"
