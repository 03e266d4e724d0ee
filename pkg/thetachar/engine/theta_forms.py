"""
Symbolic theta/eta product forms and their exact expansions.

Conventions (q = e^{2 pi i tau}, w = mu(z) + c*tau):

    theta11(u tau, w) = i * sum_n (-1)^n q^{u (n+1/2)^2 / 2} e^{2 pi i (n+1/2) w}
    theta01(u tau, w) =     sum_n (-1)^n q^{u n^2 / 2}       e^{2 pi i n w}
    eta(u tau)        =     sum_n (-1)^n q^{u (6n+1)^2 / 24}

With w = mu(z) + c*tau the exponent of a term is q^{u x^2/2 + c x} e^{x mu},
quadratic in the summation index, so every expansion is exact for any
grading: we enumerate the finitely many indices whose grade lies below the
requested order.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from math import ceil, floor, isqrt
from typing import Optional, Sequence

import structlog

from thetachar.core.config import settings
from thetachar.core.exceptions import InvalidInputError
from thetachar.engine.lattice import Vector, vector
from thetachar.engine.series import (
    GradedSeries,
    Grading,
    multiply_monomial,
    mul,
    power,
)
from thetachar.services.cache_service import expansion_cache

logger = structlog.get_logger(__name__)

HALF = Fraction(1, 2)


class ThetaKind(str, Enum):
    ETA = "eta"
    THETA11 = "theta11"
    THETA01 = "theta01"


# ============================================================================
# Product forms
# ============================================================================


@dataclass(frozen=True)
class ThetaFactor:
    """
    kind(tau_scale * tau, arg(z) + tau_shift * tau) ** exponent.

    eta factors carry no argument: ``arg == ()`` and ``tau_shift == 0``.
    """

    kind: ThetaKind
    tau_scale: int
    arg: Vector = ()
    tau_shift: Fraction = Fraction(0)
    exponent: int = 1

    def __post_init__(self) -> None:
        if not isinstance(self.tau_scale, int) or self.tau_scale < 1:
            raise InvalidInputError(f"tau scale must be a positive integer, got {self.tau_scale!r}")
        if self.kind is ThetaKind.ETA and (self.arg or self.tau_shift):
            raise InvalidInputError("eta factors take no argument")

    @property
    def base(self) -> tuple:
        return (self.kind.value, self.tau_scale, self.arg, self.tau_shift)

    def normalized(self) -> tuple["ThetaFactor", int]:
        """
        Flip the argument so its first nonzero entry is positive.

        Returns the flipped factor and the sign it produced
        (theta11 is odd, theta01 even).
        """
        if self.kind is ThetaKind.ETA:
            return self, 1
        lead = next((x for x in self.arg + (self.tau_shift,) if x != 0), Fraction(0))
        if lead >= 0:
            return self, 1
        flipped = replace(self, arg=tuple(-x for x in self.arg), tau_shift=-self.tau_shift)
        sign = -1 if self.kind is ThetaKind.THETA11 and self.exponent % 2 else 1
        return flipped, sign

    def __repr__(self) -> str:
        if self.kind is ThetaKind.ETA:
            inner = f"{self.tau_scale}tau"
        else:
            inner = f"{self.tau_scale}tau, ({','.join(map(str, self.arg))}) + {self.tau_shift}tau"
        return f"{self.kind.value}({inner})^{self.exponent}"


@dataclass(frozen=True)
class Prefactor:
    """scalar * i^unit * e^{2 pi i t_exp t} * q^{q_exp} * e^{w_exp}."""

    w_exp: Vector
    t_exp: Fraction = Fraction(0)
    q_exp: Fraction = Fraction(0)
    unit: int = 0
    scalar: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "unit", self.unit % 4)

    @classmethod
    def identity(cls, rank: int) -> "Prefactor":
        return cls(tuple(Fraction(0) for _ in range(rank)))

    def __mul__(self, other: "Prefactor") -> "Prefactor":
        return Prefactor(
            tuple(a + b for a, b in zip(self.w_exp, other.w_exp)),
            self.t_exp + other.t_exp,
            self.q_exp + other.q_exp,
            self.unit + other.unit,
            self.scalar * other.scalar,
        )

    def inverse(self) -> "Prefactor":
        return Prefactor(
            tuple(-x for x in self.w_exp), -self.t_exp, -self.q_exp, -self.unit, 1 / self.scalar
        )

    def canonical(self) -> "Prefactor":
        """Fold i^2 = -1 into the scalar."""
        if self.unit >= 2:
            return replace(self, unit=self.unit - 2, scalar=-self.scalar)
        return self


@dataclass(frozen=True)
class ThetaProductForm:
    """Prefactor times a finite product of theta/eta factors."""

    rank: int
    prefactor: Prefactor
    factors: tuple[ThetaFactor, ...] = field(default=())

    def __mul__(self, other: "ThetaProductForm") -> "ThetaProductForm":
        if self.rank != other.rank:
            raise InvalidInputError(f"cannot multiply forms of rank {self.rank} and {other.rank}")
        return ThetaProductForm(
            self.rank, self.prefactor * other.prefactor, self.factors + other.factors
        ).canonical()

    def inverse(self) -> "ThetaProductForm":
        return ThetaProductForm(
            self.rank,
            self.prefactor.inverse(),
            tuple(replace(f, exponent=-f.exponent) for f in self.factors),
        )

    def canonical(self) -> "ThetaProductForm":
        """Merge equal factors, drop zero exponents, normalize signs and ordering."""
        scalar = self.prefactor.scalar
        merged: dict[tuple, ThetaFactor] = {}
        for factor in self.factors:
            factor, sign = factor.normalized()
            scalar *= sign
            if factor.base in merged:
                seen = merged[factor.base]
                merged[factor.base] = replace(seen, exponent=seen.exponent + factor.exponent)
            else:
                merged[factor.base] = factor
        factors = tuple(
            merged[key] for key in sorted(merged) if merged[key].exponent != 0
        )
        prefactor = replace(self.prefactor, scalar=scalar).canonical()
        return ThetaProductForm(self.rank, prefactor, factors)

    def __repr__(self) -> str:
        p = self.prefactor
        head = f"{p.scalar}*i^{p.unit}*e(t*{p.t_exp})*q^{p.q_exp}*e^({','.join(map(str, p.w_exp))})"
        return " * ".join([head] + [repr(f) for f in self.factors])


def eta_factor(tau_scale: int, exponent: int = 1) -> ThetaFactor:
    return ThetaFactor(ThetaKind.ETA, tau_scale, (), Fraction(0), exponent)


def theta11_factor(tau_scale: int, arg: Sequence, tau_shift=0, exponent: int = 1) -> ThetaFactor:
    return ThetaFactor(ThetaKind.THETA11, tau_scale, vector(arg), Fraction(tau_shift), exponent)


def theta01_factor(tau_scale: int, arg: Sequence, tau_shift=0, exponent: int = 1) -> ThetaFactor:
    return ThetaFactor(ThetaKind.THETA01, tau_scale, vector(arg), Fraction(tau_shift), exponent)


# ============================================================================
# Expansions
# ============================================================================


def _value(a2: Fraction, b1: Fraction, x: Fraction) -> Fraction:
    return a2 * x * x + b1 * x


def _lowest_value(a2: Fraction, b1: Fraction, offset: Fraction) -> Fraction:
    n0 = floor(-b1 / (2 * a2) - offset)
    return min(_value(a2, b1, n + offset) for n in range(n0 - 1, n0 + 3))


def _window(a2: Fraction, b1: Fraction, offset: Fraction, bound: Fraction) -> range:
    """Integers n with a2 (n+offset)^2 + b1 (n+offset) possibly < bound."""
    vmin = -b1 * b1 / (4 * a2)
    if bound <= vmin:
        return range(0)
    center = -b1 / (2 * a2) - offset
    # |n - center| < sqrt((bound - vmin)/a2) < isqrt(floor(.)) + 1
    radius = isqrt(floor((bound - vmin) / a2)) + 1
    return range(floor(center) - radius, ceil(center) + radius + 1)


def _resolve(grading: Optional[Grading], rank: int) -> Grading:
    grading = grading if grading is not None else Grading.by_q(rank)
    if grading.rank != rank:
        raise InvalidInputError(f"grading of rank {grading.rank} for an argument of rank {rank}")
    return grading


def _theta_sum(kind: ThetaKind, u: int, mu: Vector, c: Fraction, depth, grading: Grading) -> GradedSeries:
    if not isinstance(u, int) or u < 1:
        raise InvalidInputError(f"tau scale must be a positive integer, got {u!r}")
    key = (kind.value, u, mu, c, Fraction(depth), grading.slope)
    cached = expansion_cache.get(key)
    if cached is not None:
        return cached

    offset = HALF if kind is ThetaKind.THETA11 else Fraction(0)
    a2 = Fraction(u, 2)
    b1 = c + sum((s * m for s, m in zip(grading.slope, mu)), Fraction(0))
    order = _lowest_value(a2, b1, offset) + Fraction(depth)

    terms: dict = {}
    for n in _window(a2, b1, offset, order):
        x = n + offset
        if _value(a2, b1, x) >= order:
            continue
        monomial = (a2 * x * x + c * x, tuple(x * m for m in mu))
        terms[monomial] = terms.get(monomial, 0) + (-1) ** (n % 2)

    series = GradedSeries.from_terms(
        terms, rank=len(mu), order=order, grading=grading,
        unit=1 if kind is ThetaKind.THETA11 else 0,
    )
    expansion_cache.set(key, series)
    logger.debug("Expanded theta", kind=kind.value, u=u, terms=len(series), order=str(order))
    return series


def expand_theta11(
    u: int, mu: Sequence, c=0, depth=None, *, grading: Optional[Grading] = None
) -> GradedSeries:
    """theta11(u tau, mu(z) + c tau), known to ``depth`` above its lowest grade."""
    mu = vector(mu)
    depth = settings.ORDER if depth is None else depth
    return _theta_sum(ThetaKind.THETA11, u, mu, Fraction(c), depth, _resolve(grading, len(mu)))


def expand_theta01(
    u: int, mu: Sequence, c=0, depth=None, *, grading: Optional[Grading] = None
) -> GradedSeries:
    """theta01(u tau, mu(z) + c tau)."""
    mu = vector(mu)
    depth = settings.ORDER if depth is None else depth
    return _theta_sum(ThetaKind.THETA01, u, mu, Fraction(c), depth, _resolve(grading, len(mu)))


def expand_eta(u: int, depth=None, *, grading: Optional[Grading] = None, rank: int = 0) -> GradedSeries:
    """eta(u tau) = q^{u/24} prod (1 - q^{un})."""
    if not isinstance(u, int) or u < 1:
        raise InvalidInputError(f"tau scale must be a positive integer, got {u!r}")
    grading = grading if grading is not None else Grading.by_q(rank)
    depth = settings.ORDER if depth is None else depth
    key = ("eta", u, Fraction(depth), grading.slope)
    cached = expansion_cache.get(key)
    if cached is not None:
        return cached

    order = Fraction(u, 24) + Fraction(depth)
    # |6n + 1| < sqrt(24 order / u) < limit
    limit = isqrt(floor(24 * order / u)) + 1
    zero = (0,) * grading.rank
    terms = {}
    for n in range(-limit, limit + 1):
        q = Fraction(u * (6 * n + 1) ** 2, 24)
        if q < order:
            terms[(q, zero)] = (-1) ** (n % 2)
    series = GradedSeries.from_terms(terms, rank=grading.rank, order=order, grading=grading)
    expansion_cache.set(key, series)
    return series


def expand_factor(factor: ThetaFactor, depth=None, *, grading: Grading) -> GradedSeries:
    """Expansion of a factor including its exponent."""
    if factor.kind is ThetaKind.ETA:
        base = expand_eta(factor.tau_scale, depth, grading=grading)
    elif factor.kind is ThetaKind.THETA11:
        base = expand_theta11(factor.tau_scale, factor.arg, factor.tau_shift, depth, grading=grading)
    else:
        base = expand_theta01(factor.tau_scale, factor.arg, factor.tau_shift, depth, grading=grading)
    return power(base, factor.exponent)


def evaluate_product_form(
    form: ThetaProductForm, depth=None, *, grading: Optional[Grading] = None
) -> GradedSeries:
    """
    Expand a product form.

    Every factor is expanded ``depth`` above its own lowest grade, so the
    product is known ``depth`` above the sum of those grades.
    """
    grading = _resolve(grading, form.rank)
    depth = settings.ORDER if depth is None else depth
    p = form.prefactor
    result = GradedSeries.monomial(
        p.q_exp, p.w_exp, p.scalar, rank=form.rank, grading=grading, t_exp=p.t_exp, unit=p.unit
    )
    for factor in form.factors:
        result = mul(result, expand_factor(factor, depth, grading=grading))
    return result


# ============================================================================
# Transformation laws
# ============================================================================


@dataclass(frozen=True)
class EllipticFactor:
    """sign * i^unit * q^{q_exp} * e^{w_exp}."""

    sign: int
    q_exp: Fraction
    w_exp: Vector
    unit: int = 0

    def apply(self, series: GradedSeries) -> GradedSeries:
        return multiply_monomial(series, self.q_exp, self.w_exp, self.sign, unit=self.unit)


def elliptic_transform(m: int, n: int, mu: Sequence, c=0, u: int = 1) -> EllipticFactor:
    """
    theta11(u tau, w + m u tau + n) = (-1)^{m+n} q^{-u m^2/2} e^{-2 pi i m w} theta11(u tau, w)

    for w = mu(z) + c tau.
    """
    mu = vector(mu)
    c = Fraction(c)
    return EllipticFactor(
        (-1) ** ((m + n) % 2),
        -Fraction(u * m * m, 2) - m * c,
        tuple(-m * x for x in mu),
    )


def half_period_transform(u: int, mu: Sequence, c=0) -> EllipticFactor:
    """
    theta11(u tau, w - u tau/2) = i q^{-u/8} e^{pi i w} theta01(u tau, w)

    for w = mu(z) + c tau.
    """
    mu = vector(mu)
    c = Fraction(c)
    return EllipticFactor(1, -Fraction(u, 8) + c / 2, tuple(x / 2 for x in mu), unit=1)
