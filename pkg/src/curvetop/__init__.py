"""Exact combinatorial machinery for curves on surfaces, curve complexes,
subsurface projections and Heegaard splitting verdicts."""

__version__ = "0.1.0"
