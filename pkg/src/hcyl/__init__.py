"""Homology cylinders from admissible presentations: Fox calculus, the Magnus
representation at N_2, torsions and degree invariants."""

__version__ = "0.1.0"
