"""
Modular S-matrix and Verlinde fusion coefficients of boundary admissible
weights.

For weights (beta, y), (beta', y') at level k = h∨/u - h∨:

    S = c * eps(y y') * prod_{alpha>0} 2 sin(pi u (rho|alpha)/h∨)
          * exp(-2 pi i ((rho|beta + beta') + h∨ (beta|beta')/u))

Under the default "calibrated" normalization c is fixed by unitarity, which
makes every entry of modulus n^{-1/2} (n the number of boundary weights).
The "literal" normalization keeps |Q/u h∨ Q*|^{-1/2} with the sine argument
multiplied by i, as the formula is sometimes printed.
"""

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

import numpy as np
import structlog

from thetachar.core.config import settings
from thetachar.core.exceptions import InvalidInputError, LevelMismatchError, NonIntegerFusionError
from thetachar.engine.affine_weights import AdmissibleDescriptor, enumerate_boundary
from thetachar.engine.lattice import smith_invariants
from thetachar.engine.root_system import RootSystem, build, dual_lattice_basis

logger = structlog.get_logger(__name__)


def lattice_index(rs: RootSystem, u: int) -> int:
    """|Q / u h∨ Q*| from the Smith normal form of Q* -> Q coordinates."""
    scale = u * rs.h_dual
    basis = dual_lattice_basis(rs)
    # columns: u h∨ x_j in simple-root coordinates
    rows = [
        [int(scale * c) for c in (rs.root_coordinates(basis[j])[i] for j in range(rs.rank))]
        for i in range(rs.rank)
    ]
    invariants = smith_invariants(rows)
    index = 1
    for value in invariants:
        index *= value
    return index


def _phase(x: Fraction) -> complex:
    """exp(-2 pi i x) computed from the fractional part of x."""
    return cmath.exp(-2j * math.pi * float(x % 1))


@lru_cache(maxsize=64)
def _weights(cartan: str, u: int) -> tuple[AdmissibleDescriptor, ...]:
    return tuple(enumerate_boundary(build(cartan), u))


def _sine_product(rs: RootSystem, u: int, literal: bool) -> complex:
    value: complex = 1.0
    for alpha in rs.positive_roots:
        x = math.pi * u * float(rs.inner(rs.rho, alpha)) / rs.h_dual
        value *= 2 * (cmath.sin(1j * x) if literal else math.sin(x))
    return value


def s_entry(
    d1: AdmissibleDescriptor, d2: AdmissibleDescriptor, normalization: Optional[str] = None
) -> complex:
    """
    Raises:
        LevelMismatchError: the weights have different type or u
    """
    if (d1.cartan, d1.u) != (d2.cartan, d2.u):
        raise LevelMismatchError(
            f"S-matrix entry between levels {d1.cartan}/u={d1.u} and {d2.cartan}/u={d2.u}"
        )
    normalization = normalization or settings.S_MATRIX_NORMALIZATION
    rs = d1.root_system
    u = d1.u
    exponent = rs.inner(rs.rho, tuple(a + b for a, b in zip(d1.beta, d2.beta))) + Fraction(
        rs.h_dual, u
    ) * rs.inner(d1.beta, d2.beta)
    sign = d1.y.sign * d2.y.sign

    if normalization == "literal":
        scale = lattice_index(rs, u) ** -0.5 * _sine_product(rs, u, literal=True)
    elif normalization == "calibrated":
        n = len(_weights(d1.cartan, u))
        scale = math.copysign(n**-0.5, _sine_product(rs, u, literal=False).real)
    else:
        raise InvalidInputError(f"unknown S-matrix normalization {normalization!r}")
    return sign * scale * _phase(exponent)


@dataclass(frozen=True)
class SMatrix:
    weights: tuple[AdmissibleDescriptor, ...]
    entries: np.ndarray

    @property
    def size(self) -> int:
        return len(self.weights)

    def is_unitary(self, tolerance: Optional[float] = None) -> bool:
        tol = settings.MATRIX_TOLERANCE if tolerance is None else tolerance
        product = self.entries @ self.entries.conj().T
        return bool(np.allclose(product, np.eye(self.size), atol=tol, rtol=0))

    def is_symmetric(self, tolerance: Optional[float] = None) -> bool:
        tol = settings.MATRIX_TOLERANCE if tolerance is None else tolerance
        return bool(np.allclose(self.entries, self.entries.T, atol=tol, rtol=0))

    def index_of(self, d: AdmissibleDescriptor) -> int:
        return self.weights.index(d)


def s_matrix(rs: RootSystem, u: int, normalization: Optional[str] = None) -> SMatrix:
    """S-matrix over all boundary weights, vacuum first."""
    weights = _weights(rs.cartan_type.label, u)
    n = len(weights)
    entries = np.empty((n, n), dtype=complex)
    for a, d1 in enumerate(weights):
        for b, d2 in enumerate(weights[a:], start=a):
            entries[a, b] = entries[b, a] = s_entry(d1, d2, normalization)
    logger.info("Built S-matrix", cartan=str(rs.cartan_type), u=u, size=n)
    return SMatrix(weights, entries)


def fusion_tensor(rs: RootSystem, u: int, normalization: Optional[str] = None) -> np.ndarray:
    """
    N_{abc} = sum_m S_am S_bm S_cm / S_0m, rounded to integers.

    Raises:
        NonIntegerFusionError: a coefficient is further than FUSION_TOLERANCE from an integer
    """
    s = s_matrix(rs, u, normalization)
    raw = np.einsum("am,bm,cm,m->abc", s.entries, s.entries, s.entries, 1 / s.entries[0])
    rounded = np.rint(raw.real)
    error = max(float(np.max(np.abs(raw - rounded))), 0.0)
    if error > settings.FUSION_TOLERANCE:
        raise NonIntegerFusionError(
            f"fusion coefficients deviate from integers by {error:.3g}",
            details={"cartan": str(rs.cartan_type), "u": u, "max_error": error},
        )
    return rounded.astype(int)


def verlinde_fusion(
    d1: AdmissibleDescriptor,
    d2: AdmissibleDescriptor,
    d3: AdmissibleDescriptor,
    normalization: Optional[str] = None,
) -> int:
    """
    Raises:
        LevelMismatchError, NonIntegerFusionError
    """
    if not ((d1.cartan, d1.u) == (d2.cartan, d2.u) == (d3.cartan, d3.u)):
        raise LevelMismatchError("fusion coefficient between weights of different levels")
    s = s_matrix(d1.root_system, d1.u, normalization)
    a, b, c = s.index_of(d1), s.index_of(d2), s.index_of(d3)
    value = complex(np.sum(s.entries[a] * s.entries[b] * s.entries[c] / s.entries[0]))
    rounded = round(value.real)
    if abs(value - rounded) > settings.FUSION_TOLERANCE:
        raise NonIntegerFusionError(
            f"fusion coefficient {value} is not an integer",
            details={"weights": [d1.label, d2.label, d3.label]},
        )
    return int(rounded)


# ============================================================================
# Closed forms
# ============================================================================


def sl2_fusion_closed_form(u: int, j1: int, j2: int, j3: int) -> int:
    """(-1)^J if J = j1 + j2 + j3 is divisible by u, else 0."""
    total = j1 + j2 + j3
    return (-1) ** (total % 2) if total % u == 0 else 0


def sl3_fusion_closed_form(u: int, labels: list[tuple[int, tuple[int, int]]]) -> int:
    """
    For three weights (p, (k1, k2)): (-1)^{p+p'+p''} when
    sum (-1)^p k_i is divisible by u for i = 1, 2, else 0.
    """
    sums = [sum((-1) ** p * k[i] for p, k in labels) for i in range(2)]
    if all(s % u == 0 for s in sums):
        return (-1) ** (sum(p for p, _ in labels) % 2)
    return 0


def sl2_s_closed_form(u: int, j1: int, j2: int) -> complex:
    """(-1)^{j+j'} e^{-2 pi i j j'/u} sin(u pi/2) / sqrt(u)."""
    return (-1) ** ((j1 + j2) % 2) * _phase(Fraction(j1 * j2, u)) * math.sin(u * math.pi / 2) / math.sqrt(u)
