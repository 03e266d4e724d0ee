"""
Exact rational linear algebra on small matrices, backed by sympy.

Vectors and matrices are plain tuples of ``Fraction``; sympy is used only
for the operations it does better than hand-written elimination (inverse,
rank, kernels, Smith normal form).
"""

from fractions import Fraction
from typing import Optional, Sequence

import sympy
from sympy.matrices.normalforms import smith_normal_form
from sympy.polys.domains import ZZ

Vector = tuple[Fraction, ...]
Matrix = tuple[tuple[Fraction, ...], ...]


def to_fraction(value) -> Fraction:
    """Convert ints, Fractions and sympy rationals to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, sympy.Basic):
        rational = sympy.Rational(value)
        return Fraction(int(rational.p), int(rational.q))
    return Fraction(value)


def vector(values: Sequence) -> Vector:
    return tuple(to_fraction(v) for v in values)


def _to_sympy(rows: Sequence[Sequence]) -> sympy.Matrix:
    return sympy.Matrix(
        [[sympy.Rational(to_fraction(x).numerator, to_fraction(x).denominator) for x in row] for row in rows]
    )


def _from_sympy(m: sympy.Matrix) -> Matrix:
    return tuple(tuple(to_fraction(m[i, j]) for j in range(m.cols)) for i in range(m.rows))


def inverse(rows: Sequence[Sequence]) -> Matrix:
    return _from_sympy(_to_sympy(rows).inv())


def integer_inverse(rows: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    """Inverse of a unimodular integer matrix (e.g. a Weyl group element)."""
    inv = inverse(rows)
    return tuple(tuple(int(x) for x in row) for row in inv)


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return int(_to_sympy(rows).rank())


def nullspace(rows: Sequence[Sequence], dim: int) -> list[Vector]:
    """Basis of {v : rows @ v = 0} in a space of dimension ``dim``."""
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
    basis = _to_sympy(rows).nullspace()
    return [tuple(to_fraction(b[i]) for i in range(dim)) for b in basis]


def solve_left(rows: Sequence[Sequence], target: Sequence) -> Optional[Vector]:
    """Solve t @ rows = target for t; None when inconsistent."""
    target = vector(target)
    if not rows:
        return () if all(x == 0 for x in target) else None
    system = _to_sympy(rows).T
    rhs = _to_sympy([[x] for x in target])
    try:
        solution, params = system.gauss_jordan_solve(rhs)
    except ValueError:
        return None
    if params.shape[0]:
        solution = solution.subs({p: 0 for p in params})
    return tuple(to_fraction(solution[i, 0]) for i in range(solution.rows))


def mat_vec(rows: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(sum((Fraction(a) * b for a, b in zip(row, v)), Fraction(0)) for row in rows)


def vec_mat(v: Sequence, rows: Sequence[Sequence]) -> Vector:
    """Row vector times matrix."""
    if not rows:
        return ()
    cols = len(rows[0])
    return tuple(
        sum((Fraction(v[i]) * rows[i][j] for i in range(len(rows))), Fraction(0)) for j in range(cols)
    )


def smith_invariants(rows: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero invariant factors of an integer matrix."""
    m = sympy.Matrix([[int(x) for x in row] for row in rows])
    snf = smith_normal_form(m, domain=ZZ)
    size = min(snf.rows, snf.cols)
    return [abs(int(snf[i, i])) for i in range(size) if snf[i, i] != 0]
