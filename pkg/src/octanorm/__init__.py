"""Desk-scale computations for absolute sums of Banach spaces.

Absolute normalized norms on the plane, their duals, octahedrality and
diameter-two checkers, directional-derivative calculus on finitely supported
sequence spaces, and average-roughness estimates.
"""

__version__ = "0.1.0"
