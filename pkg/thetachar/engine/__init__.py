"""
Computational engine: exact series, root systems, affine weights, theta
product forms, boundary characters, modular data and W-algebra reductions.
"""
