"""
Affine weights, the extended affine Weyl group action, and boundary
admissible weights.

An affine weight Lambda = lam + k*Lambda_0 + a*delta is stored as
``AffineWeight(finite=lam, level=k, delta=a)``; the invariant form is

    (Lambda|M) = (lam|mu) + k * M.delta + Lambda.delta * m.

Boundary level: k + h∨ = h∨/u with gcd(u, h∨) = gcd(u, r∨) = 1. Boundary
weights are Lambda = (t_beta y).(k Lambda_0) for beta in Q*, y in W with
(t_beta y) mapping the scaled base Pi_u to positive affine roots.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Optional, Sequence

import structlog

from thetachar.core.exceptions import (
    CriticalLevelError,
    InadmissibleDescriptorError,
    InvalidInputError,
    InvalidUError,
    NotInDualLatticeError,
)
from thetachar.engine import lattice
from thetachar.engine.lattice import Vector, vector
from thetachar.engine.root_system import RootSystem, WeylElement, build

logger = structlog.get_logger(__name__)


# ============================================================================
# Types
# ============================================================================


@dataclass(frozen=True)
class AffineWeight:
    finite: Vector
    level: Fraction
    delta: Fraction = Fraction(0)

    @classmethod
    def of(cls, finite: Sequence, level, delta=0) -> "AffineWeight":
        return cls(vector(finite), Fraction(level), Fraction(delta))

    def __add__(self, other: "AffineWeight") -> "AffineWeight":
        return AffineWeight(
            tuple(a + b for a, b in zip(self.finite, other.finite)),
            self.level + other.level,
            self.delta + other.delta,
        )

    def __sub__(self, other: "AffineWeight") -> "AffineWeight":
        return AffineWeight(
            tuple(a - b for a, b in zip(self.finite, other.finite)),
            self.level - other.level,
            self.delta - other.delta,
        )

    def __repr__(self) -> str:
        finite = ", ".join(str(x) for x in self.finite)
        return f"AffineWeight(({finite}), level={self.level}, delta={self.delta})"


@dataclass(frozen=True)
class AffineRoot:
    """Real affine root alpha + n*delta."""

    finite: Vector
    n: int


@dataclass(frozen=True)
class AffineTransform:
    """The element t_beta y of the extended affine Weyl group."""

    beta: Vector
    y: WeylElement

    def apply(self, rs: RootSystem, weight: AffineWeight) -> AffineWeight:
        moved = AffineWeight(self.y.act(weight.finite), weight.level, weight.delta)
        return translate(rs, moved, self.beta)


@dataclass(frozen=True)
class AdmissibleDescriptor:
    """
    Boundary admissible weight Lambda = (t_beta y).(k Lambda_0).

    ``cartan`` is the type label so descriptors stay hashable and
    serializable; ``root_system`` resolves it through the shared cache.
    """

    cartan: str
    u: int
    beta: Vector
    y: WeylElement
    level: Fraction
    weight: AffineWeight = field(compare=False)

    @property
    def root_system(self) -> RootSystem:
        return build(self.cartan)

    @property
    def transform(self) -> AffineTransform:
        return AffineTransform(self.beta, self.y)

    @property
    def p(self) -> int:
        """0 when y = 1, else 1 (the labelling used for sl_3)."""
        return 0 if self.y.is_identity else 1

    @property
    def is_vacuum(self) -> bool:
        return self.y.is_identity and all(b == 0 for b in self.beta)

    @property
    def sort_key(self) -> tuple:
        return (self.y.length, self.y.word, tuple(-b for b in self.beta))

    @property
    def label(self) -> str:
        beta = ",".join(str(b) for b in self.beta)
        word = ".".join(map(str, self.y.word)) or "1"
        return f"{self.cartan} u={self.u} beta=({beta}) y={word}"


# ============================================================================
# Affine Weyl group action
# ============================================================================


def rho_hat(rs: RootSystem) -> AffineWeight:
    """rho + h∨ Lambda_0."""
    return AffineWeight(rs.rho, Fraction(rs.h_dual), Fraction(0))


def affine_inner(rs: RootSystem, lam: AffineWeight, mu: AffineWeight) -> Fraction:
    return rs.inner(lam.finite, mu.finite) + lam.level * mu.delta + lam.delta * mu.level


def affine_norm_sq(rs: RootSystem, lam: AffineWeight) -> Fraction:
    return affine_inner(rs, lam, lam)


def translate(rs: RootSystem, weight: AffineWeight, beta: Sequence) -> AffineWeight:
    """
    t_beta(lam) = lam + K beta - ((lam|beta) + K|beta|^2/2) delta.

    Raises:
        NotInDualLatticeError: beta is not in Q*
    """
    beta = vector(beta)
    if not rs.in_dual_lattice(beta):
        raise NotInDualLatticeError(f"{beta} is not in the dual root lattice of {rs.cartan_type}")
    K = weight.level
    finite = tuple(x + K * b for x, b in zip(weight.finite, beta))
    delta = weight.delta - (rs.inner(weight.finite, beta) + K * rs.norm_sq(beta) / 2)
    return AffineWeight(finite, K, delta)


def shifted_act(rs: RootSystem, w: AffineTransform, weight: AffineWeight) -> AffineWeight:
    """w.Lambda = w(Lambda + rho_hat) - rho_hat."""
    rh = rho_hat(rs)
    return w.apply(rs, weight + rh) - rh


def act_on_root(rs: RootSystem, w: AffineTransform, root: AffineRoot) -> AffineRoot:
    """(t_beta y)(alpha + n delta) = y alpha + (n - (y alpha|beta)) delta."""
    image = w.y.act(root.finite)
    shift = rs.inner(image, w.beta)
    if shift.denominator != 1:
        raise NotInDualLatticeError(f"(y alpha|beta) = {shift} is not an integer")
    return AffineRoot(image, root.n - int(shift))


def is_positive_affine_root(rs: RootSystem, root: AffineRoot) -> bool:
    return root.n > 0 or (root.n == 0 and rs.is_positive_root(root.finite))


def pi_hat_u(rs: RootSystem, u: int) -> tuple[AffineRoot, ...]:
    """{-theta + u delta, alpha_1, ..., alpha_l}."""
    theta = tuple(-x for x in rs.theta)
    return (AffineRoot(theta, u),) + tuple(AffineRoot(a, 0) for a in rs.simple_roots)


# ============================================================================
# Boundary weights
# ============================================================================


def validate_boundary_u(rs: RootSystem, u: int) -> None:
    """
    Raises:
        InvalidUError: u < 1 or gcd(u, h∨) != 1 or gcd(u, r∨) != 1
    """
    if not isinstance(u, int) or u < 1:
        raise InvalidUError(f"u must be a positive integer, got {u!r}")
    for name, value in (("h∨", rs.h_dual), ("r∨", rs.r_dual)):
        g = gcd(u, value)
        if g != 1:
            raise InvalidUError(
                f"gcd(u, {name}) = gcd({u}, {value}) = {g}; boundary level "
                f"k + h∨ = h∨/u requires gcd(u, h∨) = gcd(u, r∨) = 1",
                details={"u": u, name: value, "gcd": g},
            )


def boundary_level(rs: RootSystem, u: int) -> Fraction:
    validate_boundary_u(rs, u)
    return Fraction(rs.h_dual, u) - rs.h_dual


def _maps_base_positive(rs: RootSystem, u: int, w: AffineTransform) -> bool:
    return all(is_positive_affine_root(rs, act_on_root(rs, w, r)) for r in pi_hat_u(rs, u))


def make_descriptor(
    rs: RootSystem, u: int, beta: Sequence, y: Optional[WeylElement] = None
) -> AdmissibleDescriptor:
    """
    Validate (u, beta, y) and compute Lambda = (t_beta y).(k Lambda_0).

    Raises:
        InvalidUError, NotInDualLatticeError, InadmissibleDescriptorError
    """
    k = boundary_level(rs, u)
    beta = vector(beta)
    if len(beta) != rs.rank:
        raise InvalidInputError(f"beta {beta} does not have rank {rs.rank}")
    if not rs.in_dual_lattice(beta):
        raise NotInDualLatticeError(f"{beta} is not in the dual root lattice of {rs.cartan_type}")
    y = rs.identity if y is None else y
    w = AffineTransform(beta, y)
    if not _maps_base_positive(rs, u, w):
        raise InadmissibleDescriptorError(
            f"t_beta y does not map the u-scaled base to positive roots "
            f"(beta={[str(b) for b in beta]}, y={list(y.word)}, u={u})"
        )
    weight = shifted_act(rs, w, AffineWeight(tuple(Fraction(0) for _ in beta), k, Fraction(0)))
    return AdmissibleDescriptor(rs.cartan_type.label, u, beta, y, k, weight)


def vacuum_descriptor(rs: RootSystem, u: int) -> AdmissibleDescriptor:
    return make_descriptor(rs, u, (0,) * rs.rank)


def enumerate_boundary(rs: RootSystem, u: int) -> list[AdmissibleDescriptor]:
    """
    All boundary admissible weights of level h∨/u - h∨, deduplicated by Lambda.

    beta runs over the box |c_i| <= u*h∨ in the Q* basis; that box contains
    every solution since the images of Pi_u must lie in a bounded simplex.
    """
    validate_boundary_u(rs, u)
    bound = u * rs.h_dual
    coefficient_range = range(-bound, bound + 1)
    found: dict[AffineWeight, AdmissibleDescriptor] = {}

    for y in rs.weyl_elements():
        images = [y.act(r.finite) for r in pi_hat_u(rs, u)]
        shifts = [r.n for r in pi_hat_u(rs, u)]
        positive = [rs.is_positive_root(im) for im in images]
        # (y alpha|x_j) is the j-th simple-root coordinate of y alpha
        coords = [rs.root_coordinates(im) for im in images]
        for coefficients in product(coefficient_range, repeat=rs.rank):
            ok = True
            for c_root, n, pos in zip(coords, shifts, positive):
                m = n - sum(c * x for c, x in zip(coefficients, c_root))
                if m < 0 or (m == 0 and not pos):
                    ok = False
                    break
            if not ok:
                continue
            descriptor = make_descriptor(rs, u, rs.from_q_star(coefficients), y)
            found.setdefault(descriptor.weight, descriptor)

    result = sorted(found.values(), key=lambda d: d.sort_key)
    logger.info("Enumerated boundary weights", cartan=str(rs.cartan_type), u=u, count=len(result))
    return result


# ============================================================================
# Named descriptors from the worked examples
# ============================================================================


def descriptor_for_j(u: int, j: int) -> AdmissibleDescriptor:
    """sl_2: Lambda_{u,j} with beta = -j omega_1, y = 1, 0 <= j <= u-1."""
    rs = build("A1")
    if not 0 <= j < u:
        raise InvalidInputError(f"j must satisfy 0 <= j <= u-1, got j={j}, u={u}")
    return make_descriptor(rs, u, (-j,))


def descriptor_for_p_k(u: int, p: int, k1: int, k2: int) -> AdmissibleDescriptor:
    """
    sl_3: beta = -(-1)^p (k1 omega_1 + k2 omega_2), y = 1 (p = 0) or r_theta (p = 1).
    """
    rs = build("A2")
    if p not in (0, 1):
        raise InvalidInputError(f"p must be 0 or 1, got {p}")
    sign = -1 if p == 0 else 1
    y = rs.identity if p == 0 else rs.reflection_element(rs.theta)
    return make_descriptor(rs, u, (sign * k1, sign * k2), y)


def descriptor_labels(d: AdmissibleDescriptor) -> tuple[int, tuple[int, ...]]:
    """Inverse of ``descriptor_for_p_k``: (p, k)."""
    sign = -1 if d.p == 0 else 1
    return d.p, tuple(int(sign * b) for b in d.beta)


def sln_u2_descriptor(n: int, p: int) -> AdmissibleDescriptor:
    """sl_N, u = 2: Lambda = -(N/2) Lambda_p via beta = -omega_p, y = 1."""
    if n < 3 or n % 2 == 0:
        raise InvalidInputError(f"N must be odd and >= 3, got {n}")
    if not 0 <= p < n:
        raise InvalidInputError(f"p must satisfy 0 <= p < N, got {p}")
    rs = build(f"A{n - 1}")
    beta = tuple(-1 if i == p - 1 else 0 for i in range(n - 1))
    return make_descriptor(rs, 2, beta)


# ============================================================================
# Admissibility and normalization
# ============================================================================


def _nonpositive_integer_pairing(p0: Fraction, s: Fraction, start: int) -> bool:
    """Is p(n) = p0 + s*n a non-positive integer for some integer n >= start?"""
    if s == 0:
        return p0.denominator == 1 and p0 <= 0
    if s > 0:
        # p(n) <= 0 only for n <= -p0/s
        last = (-p0 / s).__floor__()
        return any((p0 + s * n).denominator == 1 for n in range(start, last + 1))
    # s < 0: p(n) <= 0 for all n >= first; integrality is periodic
    first = max(start, (-p0 / s).__ceil__())
    period = s.denominator
    return any((p0 + s * n).denominator == 1 for n in range(first, first + period))


def admissibility_report(
    rs: RootSystem, weight: AffineWeight, height_cutoff: Optional[int] = None
) -> list[str]:
    """Reasons why ``weight`` fails to be admissible (empty when admissible)."""
    K = weight.level + rs.h_dual
    if K == 0:
        return ["critical level"]
    shifted = tuple(x + r for x, r in zip(weight.finite, rs.rho))
    reasons = []

    # (i) <Lambda + rho_hat, a^vee> not in {0, -1, -2, ...} for positive real a
    for alpha in rs.roots:
        norm = rs.norm_sq(alpha)
        p0 = 2 * rs.inner(shifted, alpha) / norm
        s = 2 * K / norm
        start = 0 if rs.is_positive_root(alpha) else 1
        if _nonpositive_integer_pairing(p0, s, start):
            reasons.append(f"non-positive integral pairing with {tuple(map(str, alpha))} + n delta")
            break

    # (ii) the integral real roots span Q-linearly
    cutoff = height_cutoff if height_cutoff is not None else 2 * K.denominator * rs.r_dual + 1
    rows = []
    for alpha in rs.roots:
        norm = rs.norm_sq(alpha)
        for n in range(-cutoff, cutoff + 1):
            if (2 * (rs.inner(shifted, alpha) + n * K) / norm).denominator == 1:
                rows.append(tuple(rs.root_coordinates(alpha)) + (Fraction(n),))
    if lattice.rank(rows) < rs.rank + 1:
        reasons.append("integral roots do not span the affine root space")
    return reasons


def check_admissible(rs: RootSystem, weight: AffineWeight, height_cutoff: Optional[int] = None) -> bool:
    return not admissibility_report(rs, weight, height_cutoff)


def m_normalization(rs: RootSystem, weight: AffineWeight) -> Fraction:
    """
    m_Lambda = |Lambda + rho_hat|^2 / (2(k + h∨)) - dim g / 24.

    Raises:
        CriticalLevelError: k = -h∨
    """
    K = weight.level + rs.h_dual
    if K == 0:
        raise CriticalLevelError("m_Lambda is undefined at the critical level k = -h∨")
    return affine_norm_sq(rs, weight + rho_hat(rs)) / (2 * K) - Fraction(rs.dim, 24)


def top_exponent(rs: RootSystem, weight: AffineWeight) -> Fraction:
    """q-exponent of the highest-weight term of the normalized character."""
    return m_normalization(rs, weight) - weight.delta
