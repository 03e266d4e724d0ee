"""
Exact truncated series in fractional powers of q and formal exponentials e^{mu}.

A ``GradedSeries`` represents

    i^unit * e^{2 pi i t_exp t} * sum  c * q^{a} * e^{mu}

with rational coefficients ``c``, rational q-exponents ``a`` and weights ``mu``
given in fundamental-weight coordinates. Exponents are stored as integer keys
over per-series common denominators (``q_den`` for q, ``w_den`` for weights),
so every operation is exact.

Truncation is measured along a *grading*

    grade(q^a e^mu) = a + <slope, mu>

A series with ``order = N`` is known exactly for every monomial of grade < N
and says nothing above it; ``order = None`` means the series is exact (a
finite sum). The zero slope gives ordinary q-truncation. Tilted slopes are
needed for characters whose weights are unbounded at fixed q-power and they
turn shifts z -> z + tau*beta into exact operations: the shift only changes
the slope, never the truncation order.

Invariants maintained by every constructor and operation:
    - no stored coefficient is zero
    - no stored monomial has grade >= order
    - unit is 0 or 1; i^2 = -1 is folded into the coefficients
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, isqrt, lcm
from operator import itemgetter
from typing import Iterable, Mapping, Optional, Sequence, Union

import structlog

from thetachar.core.config import settings
from thetachar.core.exceptions import (
    GradingMismatchError,
    InvalidInputError,
    NotInvertibleError,
    SquareRootNotSeriesError,
    TExpMismatchError,
    UnitMismatchError,
)
from thetachar.engine.lattice import Vector, integer_inverse, mat_vec, solve_left, vec_mat

logger = structlog.get_logger(__name__)

Key = tuple[int, tuple[int, ...]]
Scalar = Union[int, Fraction]


# ============================================================================
# Monomials and gradings
# ============================================================================


@dataclass(frozen=True)
class Monomial:
    """q^{q_exp} e^{w_exp}."""

    q_exp: Fraction
    w_exp: Vector

    def __repr__(self) -> str:
        weight = ",".join(str(x) for x in self.w_exp)
        return f"q^{self.q_exp} e^({weight})"


@dataclass(frozen=True)
class Grading:
    """Linear functional grade(q^a e^mu) = a + <slope, mu>."""

    slope: Vector

    @classmethod
    def by_q(cls, rank: int) -> "Grading":
        return cls(tuple(Fraction(0) for _ in range(rank)))

    @classmethod
    def of(cls, slope: Sequence[Scalar]) -> "Grading":
        return cls(tuple(Fraction(s) for s in slope))

    @property
    def rank(self) -> int:
        return len(self.slope)

    @property
    def is_pure_q(self) -> bool:
        return all(s == 0 for s in self.slope)

    def grade(self, q_exp: Scalar, w_exp: Sequence[Scalar]) -> Fraction:
        return Fraction(q_exp) + sum((s * Fraction(x) for s, x in zip(self.slope, w_exp)), Fraction(0))


def _kernel(grading: Grading, q_den: int, w_den: int) -> tuple[int, int, tuple[int, ...]]:
    """Integer form of the grading: grade * scale = kq * q_key + <kw, w_key>."""
    parts = [s / w_den for s in grading.slope]
    scale = lcm(q_den, *(p.denominator for p in parts))
    return scale, scale // q_den, tuple(int(p * scale) for p in parts)


def _grade_int(key: Key, kq: int, kw: tuple[int, ...]) -> int:
    q, w = key
    return kq * q + sum(b * x for b, x in zip(kw, w))


def _bound(order: Optional[Fraction], scale: int) -> Optional[int]:
    return None if order is None else ceil(order * scale)


def _min_order(a: Optional[Fraction], b: Optional[Fraction]) -> Optional[Fraction]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


# ============================================================================
# Series
# ============================================================================


class GradedSeries:
    """Exact truncated series; see module docstring."""

    __slots__ = ("_terms", "q_den", "w_den", "rank", "order", "grading", "t_exp", "unit")

    def __init__(
        self,
        terms: Mapping[Key, Scalar],
        *,
        rank: int,
        q_den: int = 1,
        w_den: int = 1,
        order: Optional[Scalar] = None,
        grading: Optional[Grading] = None,
        t_exp: Scalar = 0,
        unit: int = 0,
    ):
        grading = grading if grading is not None else Grading.by_q(rank)
        if grading.rank != rank:
            raise GradingMismatchError(
                f"grading of rank {grading.rank} used for a series of rank {rank}"
            )
        unit %= 4
        negate = unit >= 2
        if negate:
            unit -= 2
        order = None if order is None else Fraction(order)
        scale, kq, kw = _kernel(grading, q_den, w_den)
        bound = _bound(order, scale)

        clean: dict[Key, Fraction] = {}
        for key, coeff in terms.items():
            if not coeff:
                continue
            if bound is not None and _grade_int(key, kq, kw) >= bound:
                continue
            clean[key] = -Fraction(coeff) if negate else Fraction(coeff)

        self._terms = clean
        self.q_den = q_den
        self.w_den = w_den
        self.rank = rank
        self.order = order
        self.grading = grading
        self.t_exp = Fraction(t_exp)
        self.unit = unit

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------

    @classmethod
    def from_terms(
        cls,
        terms: Union[
            Mapping[tuple[Scalar, Sequence[Scalar]], Scalar],
            Iterable[tuple[tuple[Scalar, Sequence[Scalar]], Scalar]],
        ],
        *,
        rank: int,
        order: Optional[Scalar] = None,
        grading: Optional[Grading] = None,
        t_exp: Scalar = 0,
        unit: int = 0,
    ) -> "GradedSeries":
        """
        Build a series from ``{(q_exp, w_exp): coeff}`` or from a sequence of
        ``((q_exp, w_exp), coeff)`` pairs; repeated monomials add up.
        """
        pairs = terms.items() if isinstance(terms, Mapping) else terms
        items = []
        for (q_exp, w_exp), coeff in pairs:
            weight = tuple(Fraction(x) for x in w_exp)
            if len(weight) != rank:
                raise InvalidInputError(f"weight {weight} does not have rank {rank}")
            items.append((Fraction(q_exp), weight, Fraction(coeff)))

        q_den = lcm(1, *(q.denominator for q, _, _ in items))
        w_den = lcm(1, *(x.denominator for _, w, _ in items for x in w))
        keyed: dict[Key, Fraction] = {}
        for q, w, c in items:
            key = (int(q * q_den), tuple(int(x * w_den) for x in w))
            keyed[key] = keyed.get(key, Fraction(0)) + c
        return cls(
            keyed, rank=rank, q_den=q_den, w_den=w_den, order=order, grading=grading,
            t_exp=t_exp, unit=unit,
        )

    @classmethod
    def monomial(
        cls,
        q_exp: Scalar = 0,
        w_exp: Optional[Sequence[Scalar]] = None,
        coeff: Scalar = 1,
        *,
        rank: Optional[int] = None,
        grading: Optional[Grading] = None,
        t_exp: Scalar = 0,
        unit: int = 0,
    ) -> "GradedSeries":
        if rank is None:
            rank = len(w_exp) if w_exp is not None else (grading.rank if grading else 0)
        if w_exp is None:
            w_exp = (0,) * rank
        return cls.from_terms(
            {(q_exp, tuple(w_exp)): coeff}, rank=rank, grading=grading, t_exp=t_exp, unit=unit
        )

    @classmethod
    def one(cls, rank: int, grading: Optional[Grading] = None) -> "GradedSeries":
        return cls.monomial(0, (0,) * rank, 1, rank=rank, grading=grading)

    @classmethod
    def zero(
        cls,
        rank: int,
        order: Optional[Scalar] = None,
        grading: Optional[Grading] = None,
        t_exp: Scalar = 0,
    ) -> "GradedSeries":
        return cls({}, rank=rank, order=order, grading=grading, t_exp=t_exp)

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------

    def __len__(self) -> int:
        return len(self._terms)

    def _monomial(self, key: Key) -> Monomial:
        q, w = key
        return Monomial(Fraction(q, self.q_den), tuple(Fraction(x, self.w_den) for x in w))

    def _key(self, q_exp: Scalar, w_exp: Sequence[Scalar]) -> Optional[Key]:
        q = Fraction(q_exp) * self.q_den
        w = [Fraction(x) * self.w_den for x in w_exp]
        if q.denominator != 1 or any(x.denominator != 1 for x in w):
            return None
        return int(q), tuple(int(x) for x in w)

    def items(self) -> list[tuple[Monomial, Fraction]]:
        """Terms sorted by q-exponent, then weight coordinates."""
        return [(self._monomial(k), c) for k, c in sorted(self._terms.items())]

    def monomials(self) -> list[Monomial]:
        return [m for m, _ in self.items()]

    def coefficient(self, q_exp: Scalar, w_exp: Optional[Sequence[Scalar]] = None) -> Fraction:
        """Coefficient of q^{q_exp} e^{w_exp} (zero when absent)."""
        if w_exp is None:
            w_exp = (0,) * self.rank
        key = self._key(q_exp, w_exp)
        if key is None:
            return Fraction(0)
        return self._terms.get(key, Fraction(0))

    def is_known(self, q_exp: Scalar, w_exp: Optional[Sequence[Scalar]] = None) -> bool:
        """True when the monomial lies below the truncation order."""
        if self.order is None:
            return True
        if w_exp is None:
            w_exp = (0,) * self.rank
        return self.grading.grade(q_exp, w_exp) < self.order

    def grade_of(self, monomial: Monomial) -> Fraction:
        return self.grading.grade(monomial.q_exp, monomial.w_exp)

    def lowest_grade(self) -> Optional[Fraction]:
        """Smallest grade among stored terms; None for an empty series."""
        if not self._terms:
            return None
        scale, kq, kw = _kernel(self.grading, self.q_den, self.w_den)
        return Fraction(min(_grade_int(k, kq, kw) for k in self._terms), scale)

    def grade_floor(self) -> Optional[Fraction]:
        """Lower bound on the grade of every (known or unknown) term."""
        low = self.lowest_grade()
        if low is None:
            return self.order
        return low if self.order is None else min(low, self.order)

    def _lowest_keys(self) -> list[Key]:
        scale, kq, kw = _kernel(self.grading, self.q_den, self.w_den)
        graded = [(_grade_int(k, kq, kw), k) for k in self._terms]
        if not graded:
            return []
        g0 = min(g for g, _ in graded)
        return sorted(k for g, k in graded if g == g0)

    def lowest_terms(self) -> list[tuple[Monomial, Fraction]]:
        return [(self._monomial(k), self._terms[k]) for k in self._lowest_keys()]

    def is_zero(self) -> bool:
        """No nonzero term below the truncation order."""
        return not self._terms

    def truncate(self, order: Scalar) -> "GradedSeries":
        return GradedSeries(
            self._terms, rank=self.rank, q_den=self.q_den, w_den=self.w_den,
            order=_min_order(self.order, Fraction(order)), grading=self.grading,
            t_exp=self.t_exp, unit=self.unit,
        )

    def _replace_terms(self, terms: Mapping[Key, Scalar], **changes) -> "GradedSeries":
        params = dict(
            rank=self.rank, q_den=self.q_den, w_den=self.w_den, order=self.order,
            grading=self.grading, t_exp=self.t_exp, unit=self.unit,
        )
        params.update(changes)
        return GradedSeries(terms, **params)

    # ------------------------------------------------------------------
    # Operators
    # ------------------------------------------------------------------

    def __neg__(self) -> "GradedSeries":
        return self._replace_terms({k: -c for k, c in self._terms.items()})

    def __add__(self, other: "GradedSeries") -> "GradedSeries":
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return add(self, other)

    def __sub__(self, other: "GradedSeries") -> "GradedSeries":
        if not isinstance(other, GradedSeries):
            return NotImplemented
        return add(self, -other)

    def __mul__(self, other: Union["GradedSeries", Scalar]) -> "GradedSeries":
        if isinstance(other, GradedSeries):
            return mul(self, other)
        if isinstance(other, (int, Fraction)):
            return scale(self, other)
        return NotImplemented

    def __rmul__(self, other: Scalar) -> "GradedSeries":
        if isinstance(other, (int, Fraction)):
            return scale(self, other)
        return NotImplemented

    def agrees_with(self, other: "GradedSeries") -> bool:
        return compare(self, other).equal

    def __repr__(self) -> str:
        shown = ", ".join(f"{c}*{m!r}" for m, c in self.items()[:6])
        more = " ..." if len(self) > 6 else ""
        unit = "i*" if self.unit else ""
        return (
            f"GradedSeries({unit}e^(t*{self.t_exp}) [{shown}{more}] "
            f"order={self.order} slope={list(map(str, self.grading.slope))})"
        )


# ============================================================================
# Internal helpers
# ============================================================================


def _check_pair(a: GradedSeries, b: GradedSeries, op: str) -> None:
    if a.rank != b.rank:
        raise InvalidInputError(f"{op}: rank {a.rank} != rank {b.rank}")
    if a.grading != b.grading:
        raise GradingMismatchError(
            f"{op}: series truncated along different gradings",
            details={"left": [str(s) for s in a.grading.slope], "right": [str(s) for s in b.grading.slope]},
        )


def _rescaled(s: GradedSeries, q_den: int, w_den: int) -> dict[Key, Fraction]:
    fq, fw = q_den // s.q_den, w_den // s.w_den
    if fq == 1 and fw == 1:
        return s._terms
    return {(q * fq, tuple(x * fw for x in w)): c for (q, w), c in s._terms.items()}


def _common(a: GradedSeries, b: GradedSeries):
    q_den, w_den = lcm(a.q_den, b.q_den), lcm(a.w_den, b.w_den)
    return q_den, w_den, _rescaled(a, q_den, w_den), _rescaled(b, q_den, w_den)


def _accumulate(out: dict[Key, Fraction], key: Key, value: Fraction) -> None:
    total = out.get(key, 0) + value
    if total:
        out[key] = total
    else:
        out.pop(key, None)


def _mul_terms(
    ta: Mapping[Key, Fraction],
    tb: Mapping[Key, Fraction],
    kq: int,
    kw: tuple[int, ...],
    bound: Optional[int],
) -> dict[Key, Fraction]:
    """Product of raw term maps keeping only grades below ``bound``."""
    graded_b = sorted(((_grade_int(k, kq, kw), k, c) for k, c in tb.items()), key=itemgetter(0))
    out: dict[Key, Fraction] = {}
    for key_a, ca in ta.items():
        ga = _grade_int(key_a, kq, kw)
        qa, wa = key_a
        for gb, (qb, wb), cb in graded_b:
            if bound is not None and ga + gb >= bound:
                break
            _accumulate(out, (qa + qb, tuple(x + y for x, y in zip(wa, wb))), ca * cb)
    return out


# ============================================================================
# Arithmetic
# ============================================================================


def add(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    """Sum; the truncation order is the smaller of the two."""
    _check_pair(a, b, "add")
    if a.t_exp != b.t_exp:
        raise TExpMismatchError(
            f"cannot add series with t-exponents {a.t_exp} and {b.t_exp}",
            details={"left": str(a.t_exp), "right": str(b.t_exp)},
        )
    unit = a.unit
    if a.unit != b.unit:
        if a.is_zero():
            unit = b.unit
        elif not b.is_zero():
            raise UnitMismatchError("cannot add a real series to an i-multiple series")

    q_den, w_den, ta, tb = _common(a, b)
    out = dict(ta)
    for key, c in tb.items():
        _accumulate(out, key, c)
    return GradedSeries(
        out, rank=a.rank, q_den=q_den, w_den=w_den, order=_min_order(a.order, b.order),
        grading=a.grading, t_exp=a.t_exp, unit=unit,
    )


def scale(a: GradedSeries, c: Scalar) -> GradedSeries:
    c = Fraction(c)
    return a._replace_terms({k: v * c for k, v in a._terms.items()})


def mul(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    """
    Product with sound truncation.

    If a is known below N_a and every term of b has grade >= g_b, the product
    is known below N_a + g_b; symmetrically for b.
    """
    _check_pair(a, b, "mul")
    t_exp = a.t_exp + b.t_exp
    unit = a.unit + b.unit
    if (a.order is None and a.is_zero()) or (b.order is None and b.is_zero()):
        return GradedSeries.zero(a.rank, None, a.grading, t_exp)

    candidates = []
    if a.order is not None:
        candidates.append(a.order + b.grade_floor())
    if b.order is not None:
        candidates.append(b.order + a.grade_floor())
    order = min(candidates) if candidates else None

    q_den, w_den, ta, tb = _common(a, b)
    scale_, kq, kw = _kernel(a.grading, q_den, w_den)
    out = _mul_terms(ta, tb, kq, kw, _bound(order, scale_))
    return GradedSeries(
        out, rank=a.rank, q_den=q_den, w_den=w_den, order=order, grading=a.grading,
        t_exp=t_exp, unit=unit,
    )


def multiply_monomial(
    a: GradedSeries,
    q_exp: Scalar = 0,
    w_exp: Optional[Sequence[Scalar]] = None,
    coeff: Scalar = 1,
    *,
    t_exp: Scalar = 0,
    unit: int = 0,
) -> GradedSeries:
    m = GradedSeries.monomial(
        q_exp, w_exp, coeff, rank=a.rank, grading=a.grading, t_exp=t_exp, unit=unit
    )
    return mul(a, m)


def _split_lead(a: GradedSeries, error: type) -> tuple[Key, Fraction, Fraction]:
    keys = a._lowest_keys()
    if len(keys) != 1:
        raise error(
            f"lowest grade of the series carries {len(keys)} monomials; exactly one is required",
            details={"lowest": [repr(a._monomial(k)) for k in keys]},
        )
    key = keys[0]
    scale_, kq, kw = _kernel(a.grading, a.q_den, a.w_den)
    return key, a._terms[key], Fraction(_grade_int(key, kq, kw), scale_)


def invert(a: GradedSeries, depth: Optional[Scalar] = None) -> GradedSeries:
    """
    Multiplicative inverse via the geometric series.

    Requires a unique monomial of lowest grade g0. If a is known below N, the
    inverse is known below N - 2*g0. Exact multi-term input is expanded to
    ``depth`` above its own lowest grade (default ``settings.ORDER``).

    Raises:
        NotInvertibleError: lowest grade empty or shared by several monomials
    """
    (q0, w0), c0, g0 = _split_lead(a, NotInvertibleError)
    zero_w = (0,) * a.rank

    if a.order is None:
        if len(a) == 1:
            return GradedSeries(
                {(-q0, tuple(-x for x in w0)): 1 / c0}, rank=a.rank, q_den=a.q_den,
                w_den=a.w_den, grading=a.grading, t_exp=-a.t_exp, unit=-a.unit,
            )
        order = -g0 + Fraction(settings.ORDER if depth is None else depth)
    else:
        order = a.order - 2 * g0
        if depth is not None:
            order = min(order, -g0 + Fraction(depth))

    scale_, kq, kw = _kernel(a.grading, a.q_den, a.w_den)
    rel_bound = _bound(order + g0, scale_)
    minus_r = {
        (q - q0, tuple(x - y for x, y in zip(w, w0))): -c / c0
        for (q, w), c in a._terms.items()
        if (q, w) != (q0, w0)
    }

    total: dict[Key, Fraction] = {(0, zero_w): Fraction(1)}
    term: dict[Key, Fraction] = {(0, zero_w): Fraction(1)}
    while term:
        term = _mul_terms(term, minus_r, kq, kw, rel_bound)
        for key, c in term.items():
            _accumulate(total, key, c)

    out = {(q - q0, tuple(x - y for x, y in zip(w, w0))): c / c0 for (q, w), c in total.items()}
    return GradedSeries(
        out, rank=a.rank, q_den=a.q_den, w_den=a.w_den, order=order, grading=a.grading,
        t_exp=-a.t_exp, unit=-a.unit,
    )


def power(a: GradedSeries, n: int, depth: Optional[Scalar] = None) -> GradedSeries:
    """a**n for any integer n (negative powers go through ``invert``)."""
    if n == 0:
        return GradedSeries.one(a.rank, a.grading)
    base = a if n > 0 else invert(a, depth)
    n = abs(n)
    result: Optional[GradedSeries] = None
    while n:
        if n & 1:
            result = base if result is None else mul(result, base)
        n >>= 1
        if n:
            base = mul(base, base)
    return result


def _rational_sqrt(c: Fraction) -> Optional[Fraction]:
    if c <= 0:
        return None
    num, den = isqrt(c.numerator), isqrt(c.denominator)
    if num * num != c.numerator or den * den != c.denominator:
        return None
    return Fraction(num, den)


def sqrt_series(a: GradedSeries, depth: Optional[Scalar] = None) -> GradedSeries:
    """
    Formal square root via the binomial series (1 + r)^(1/2).

    Raises:
        SquareRootNotSeriesError: non-unique lowest term, odd unit, or a lowest
            coefficient that is not the square of a rational
    """
    if a.unit:
        raise SquareRootNotSeriesError("square root of an odd power of i is not a series")
    (q0, w0), c0, g0 = _split_lead(a, SquareRootNotSeriesError)
    root_c0 = _rational_sqrt(c0)
    if root_c0 is None:
        raise SquareRootNotSeriesError(f"lowest coefficient {c0} is not a rational square")

    q_den, w_den = 2 * a.q_den, 2 * a.w_den
    terms = _rescaled(a, a.q_den, a.w_den)
    doubled = {(2 * q, tuple(2 * x for x in w)): c for (q, w), c in terms.items()}
    lead = (2 * q0, tuple(2 * x for x in w0))
    half_lead = (q0, w0)

    if a.order is None:
        if len(a) == 1:
            return GradedSeries(
                {half_lead: root_c0}, rank=a.rank, q_den=q_den, w_den=w_den,
                grading=a.grading, t_exp=a.t_exp / 2,
            )
        order = g0 / 2 + Fraction(settings.ORDER if depth is None else depth)
    else:
        order = a.order - g0 / 2
        if depth is not None:
            order = min(order, g0 / 2 + Fraction(depth))

    scale_, kq, kw = _kernel(a.grading, q_den, w_den)
    rel_bound = _bound(order - g0 / 2, scale_)
    zero = (0, (0,) * a.rank)
    r = {
        (q - lead[0], tuple(x - y for x, y in zip(w, lead[1]))): c / c0
        for (q, w), c in doubled.items()
        if (q, w) != lead
    }

    total: dict[Key, Fraction] = {zero: Fraction(1)}
    term: dict[Key, Fraction] = {zero: Fraction(1)}
    binom = Fraction(1)
    k = 0
    while True:
        term = _mul_terms(term, r, kq, kw, rel_bound)
        if not term:
            break
        k += 1
        binom = binom * (Fraction(1, 2) - (k - 1)) / k
        for key, c in term.items():
            _accumulate(total, key, binom * c)

    out = {
        (q + half_lead[0], tuple(x + y for x, y in zip(w, half_lead[1]))): c * root_c0
        for (q, w), c in total.items()
    }
    return GradedSeries(
        out, rank=a.rank, q_den=q_den, w_den=w_den, order=order, grading=a.grading,
        t_exp=a.t_exp / 2,
    )


# ============================================================================
# Substitutions
# ============================================================================


def substitute_q_power(a: GradedSeries, u: int) -> GradedSeries:
    """tau -> u*tau: q-exponents, truncation order and slope scale by u."""
    if not isinstance(u, int) or u < 1:
        raise InvalidInputError(f"q-power substitution needs a positive integer, got {u!r}")
    terms = {(q * u, w): c for (q, w), c in a._terms.items()}
    return a._replace_terms(
        terms,
        order=None if a.order is None else a.order * u,
        grading=Grading(tuple(s * u for s in a.grading.slope)),
    )


def shift_weight_by_tau(
    a: GradedSeries, beta: Sequence[Scalar], gram: Sequence[Sequence[Fraction]]
) -> GradedSeries:
    """
    z -> z + tau*beta: every e^{mu} picks up q^{(mu|beta)}.

    The grading slope becomes slope - G*beta so grades, and therefore the
    truncation order, are unchanged.
    """
    if len(beta) != a.rank:
        raise InvalidInputError(f"shift vector {tuple(beta)} does not have rank {a.rank}")
    g_beta = mat_vec(gram, [Fraction(b) for b in beta])
    shifts = {
        key: sum((Fraction(x, a.w_den) * g for x, g in zip(key[1], g_beta)), Fraction(0))
        for key in a._terms
    }
    q_den = lcm(a.q_den, *(s.denominator for s in shifts.values()))
    factor = q_den // a.q_den
    terms = {(q * factor + int(shifts[(q, w)] * q_den), w): c for (q, w), c in a._terms.items()}
    slope = tuple(s - g for s, g in zip(a.grading.slope, g_beta))
    return a._replace_terms(terms, q_den=q_den, grading=Grading(slope))


def weyl_transform(a: GradedSeries, matrix: Sequence[Sequence[int]]) -> GradedSeries:
    """e^{mu} -> e^{w mu} for an integer matrix w acting on weight coordinates."""
    inverse_matrix = integer_inverse(matrix)
    terms = {
        (q, tuple(sum(m * x for m, x in zip(row, w)) for row in matrix)): c
        for (q, w), c in a._terms.items()
    }
    slope = vec_mat(a.grading.slope, inverse_matrix)
    return a._replace_terms(terms, grading=Grading(slope))


def restrict_weights(a: GradedSeries, rows: Sequence[Sequence[Fraction]]) -> GradedSeries:
    """
    Restrict z to a subspace: e^{mu} -> e^{R mu} with R given row by row.

    Raises:
        GradingMismatchError: the grading does not factor through R
    """
    slope = solve_left(rows, a.grading.slope)
    if slope is None:
        raise GradingMismatchError("grading slope does not factor through the restriction")
    restricted: dict[tuple[Fraction, tuple[Fraction, ...]], Fraction] = {}
    for (q, w), c in a._terms.items():
        mu = tuple(Fraction(x, a.w_den) for x in w)
        key = (Fraction(q, a.q_den), mat_vec(rows, mu))
        restricted[key] = restricted.get(key, Fraction(0)) + c
    out = GradedSeries.from_terms(
        restricted, rank=len(rows), order=a.order, grading=Grading(slope),
        t_exp=a.t_exp, unit=a.unit,
    )
    return out


def substitute_t(
    a: GradedSeries,
    t_scale: Scalar,
    weight: Optional[Sequence[Scalar]] = None,
    q_shift: Scalar = 0,
) -> GradedSeries:
    """
    t -> t_scale*t + (weight|z) + q_shift*tau.

    e^{2 pi i T t} becomes e^{2 pi i T t_scale t} * e^{T weight} * q^{T q_shift},
    where ``weight`` is given in the series' own weight coordinates.
    """
    if weight is None:
        weight = (0,) * a.rank
    T = a.t_exp
    moved = a._replace_terms(a._terms, t_exp=T * Fraction(t_scale))
    if T == 0:
        return moved
    return multiply_monomial(moved, T * Fraction(q_shift), tuple(T * Fraction(x) for x in weight))


# ============================================================================
# Comparison
# ============================================================================


@dataclass(frozen=True)
class SeriesComparison:
    """Outcome of comparing two series on their common known region."""

    equal: bool
    checked_terms: int
    order: Optional[Fraction]
    mismatches: tuple[tuple[Monomial, Fraction, Fraction], ...] = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.equal


def compare(a: GradedSeries, b: GradedSeries, max_mismatches: int = 5) -> SeriesComparison:
    """Compare below min(order_a, order_b); units and t-exponents must agree."""
    _check_pair(a, b, "compare")
    order = _min_order(a.order, b.order)
    if a.t_exp != b.t_exp:
        return SeriesComparison(False, 0, order, reason=f"t-exponents {a.t_exp} != {b.t_exp}")

    q_den, w_den, ta, tb = _common(a, b)
    scale_, kq, kw = _kernel(a.grading, q_den, w_den)
    bound = _bound(order, scale_)
    region = [k for k in set(ta) | set(tb) if bound is None or _grade_int(k, kq, kw) < bound]

    if a.unit != b.unit and region:
        return SeriesComparison(False, len(region), order, reason="units differ")

    mismatches = []
    for key in sorted(region):
        left, right = ta.get(key, Fraction(0)), tb.get(key, Fraction(0))
        if left != right:
            monomial = Monomial(Fraction(key[0], q_den), tuple(Fraction(x, w_den) for x in key[1]))
            mismatches.append((monomial, left, right))
            if len(mismatches) >= max_mismatches:
                break
    return SeriesComparison(
        not mismatches, len(region), order, tuple(mismatches),
        reason="" if not mismatches else "coefficients differ",
    )
