"""
Flux-limited diffusion laboratory
Finite-volume and JKO integrators for the relativistic heat equation with force fields
"""

__version__ = "1.0.0"
__author__ = "fluxlim developers"
