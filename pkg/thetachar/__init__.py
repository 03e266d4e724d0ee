"""
thetachar - exact theta-function characters of boundary admissible
affine Kac-Moody modules, their modular S-matrices and W-algebra reductions.
"""

__version__ = "1.0.0"
