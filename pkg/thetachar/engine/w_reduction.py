"""
Characters of quantum Hamiltonian reductions H(Lambda) of boundary modules.

A reduction is described by a good grading x and a nilpotent f; h^f is the
part of the Cartan subalgebra commuting with f. Two routes give ch_H:

    substitution: (R_hat ch_Lambda)(tau, -tau x + z, tau (x|x)/2) / R^W,  z in h^f
    direct: product
          (-i)^{|Delta+|} q^{(h∨/2u)|beta-x|^2} e^{(h∨/u)(beta|z)}
          eta(u tau)^{(3l - dim g)/2} prod_{alpha>0} theta11(u tau, y(alpha)(z + tau beta - tau x)) / R^W

with the W-denominator

    R^W = eta(tau)^{(3l - dim g0 - dim g1/2)/2} prod_{alpha in Delta0+} theta11(tau, alpha(z))
          * (prod_{alpha in Delta1/2} theta01(tau, alpha(z)))^{1/2}.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

import structlog

from thetachar.core.config import settings
from thetachar.core.exceptions import InvalidInputError, InvalidUError, SquareRootNotSeriesError
from thetachar.engine import lattice
from thetachar.engine.affine_weights import AdmissibleDescriptor
from thetachar.engine.characters import boundary_numerator, oracle_numerator
from thetachar.engine.lattice import Vector, vector
from thetachar.engine.root_system import RootSystem, dual_lattice_basis
from thetachar.engine.series import (
    GradedSeries,
    Grading,
    SeriesComparison,
    compare,
    invert,
    mul,
    power,
    restrict_weights,
    shift_weight_by_tau,
    sqrt_series,
    substitute_t,
)
from thetachar.engine.theta_forms import (
    Prefactor,
    ThetaProductForm,
    eta_factor,
    evaluate_product_form,
    expand_eta,
    expand_theta01,
    theta11_factor,
)

logger = structlog.get_logger(__name__)

Route = Literal["substitution", "direct"]


@dataclass(frozen=True)
class NilpotentGrading:
    """Good grading ad(x) together with the roots of f and the subspace h^f."""

    cartan: str
    name: str
    x: Vector
    f_roots: tuple[Vector, ...]
    delta_zero_plus: tuple[Vector, ...]
    delta_half: tuple[Vector, ...]
    dim_g0: int
    dim_g_half: int
    hf_basis: tuple[Vector, ...]
    restriction: tuple[Vector, ...]
    slope: Vector = ()

    @property
    def hf_rank(self) -> int:
        return len(self.hf_basis)

    def restrict(self, mu: Sequence) -> Vector:
        return lattice.mat_vec(self.restriction, vector(mu))

    @property
    def series_grading(self) -> Grading:
        return Grading(self.slope) if self.slope else Grading.by_q(self.hf_rank)

    def lifted_slope(self) -> Vector:
        """The slope on weights of h whose restriction is ``slope``."""
        lifted = [Fraction(0)] * (len(self.x))
        for s, row in zip(self.slope, self.restriction):
            for i, r in enumerate(row):
                lifted[i] += s * r
        return tuple(lifted)


def grading_from_sl2(
    rs: RootSystem, x: Sequence, f_roots: Sequence[Sequence], name: str = "custom"
) -> NilpotentGrading:
    """
    Raises:
        InvalidInputError: x or f is zero, x is not a good grading, or f is not in g_{-1}
    """
    x = vector(x)
    f_roots = tuple(vector(r) for r in f_roots)
    if all(c == 0 for c in x) or not f_roots:
        raise InvalidInputError("the zero nilpotent does not define a reduction grading")

    values = {alpha: rs.inner(alpha, x) for alpha in rs.roots}
    if any((2 * v).denominator != 1 for v in values.values()):
        raise InvalidInputError("alpha(x) must be a half-integer for every root")
    if any(v > 0 and not rs.is_positive_root(a) for a, v in values.items()):
        raise InvalidInputError("roots of positive x-degree must be positive")
    if any(values.get(r) != 1 for r in f_roots):
        raise InvalidInputError("f must be built from root vectors of x-degree -1")

    delta_zero = [a for a, v in values.items() if v == 0]
    delta_zero_plus = tuple(a for a in rs.positive_roots if values[a] == 0)
    delta_half = tuple(a for a in rs.positive_roots if values[a] == Fraction(1, 2))

    # h^f = common kernel of the roots of f; identified with vectors via G
    rows = [lattice.vec_mat(r, rs.gram) for r in f_roots]
    hf_basis = tuple(lattice.nullspace(rows, rs.rank))
    restriction = tuple(lattice.vec_mat(h, rs.gram) for h in hf_basis)
    slope = _g0_slope(rs, hf_basis, restriction, delta_zero_plus, delta_half)

    return NilpotentGrading(
        cartan=rs.cartan_type.label,
        name=name,
        x=x,
        f_roots=f_roots,
        delta_zero_plus=delta_zero_plus,
        delta_half=delta_half,
        dim_g0=rs.rank + len(delta_zero),
        dim_g_half=len(delta_half),
        hf_basis=hf_basis,
        restriction=restriction,
        slope=slope,
    )


def _g0_slope(
    rs: RootSystem,
    hf_basis: tuple[Vector, ...],
    restriction: tuple[Vector, ...],
    delta_zero_plus: tuple[Vector, ...],
    delta_half: tuple[Vector, ...],
) -> Vector:
    """
    Small tilt -(rho0|mu)/H on h^f, rho0 = projected half sum of Delta0+.

    theta11(tau, alpha(z)) for alpha in Delta0+ has two lowest monomials in the
    pure q grading; the tilt separates them. |slope(alpha)| < 1/4 on Delta0+ and
    Delta1/2 keeps the theta01 leading term 1 in front.
    """
    if not delta_zero_plus:
        return ()
    if not hf_basis:
        raise InvalidInputError("Delta0+ is non-empty but h^f is zero; the W-denominator vanishes")
    rho0 = tuple(sum(col) / 2 for col in zip(*delta_zero_plus))
    basis_gram = [[rs.inner(a, b) for b in hf_basis] for a in hf_basis]
    coefficients = lattice.mat_vec(
        lattice.inverse(basis_gram), [rs.inner(h, rho0) for h in hf_basis]
    )

    def value(alpha: Vector) -> Fraction:
        return sum((c * r for c, r in zip(coefficients, lattice.mat_vec(restriction, alpha))), Fraction(0))

    values = [value(a) for a in delta_zero_plus]
    if any(v == 0 for v in values):
        raise InvalidInputError("a root of g0 vanishes on the tilt of h^f")
    H = 4 * max(abs(v) for v in values + [value(a) for a in delta_half]) + 1
    return tuple(-c / H for c in coefficients)


def principal_grading(rs: RootSystem) -> NilpotentGrading:
    """x = rho^vee, f = sum of the simple root vectors f_i."""
    x = tuple(sum(col) for col in zip(*dual_lattice_basis(rs)))
    return grading_from_sl2(rs, x, rs.simple_roots, "principal")


def minimal_grading(rs: RootSystem) -> NilpotentGrading:
    """x = theta/2, f = e_{-theta}."""
    return grading_from_sl2(rs, tuple(t / 2 for t in rs.theta), (rs.theta,), "minimal")


# ============================================================================
# Denominator and characters
# ============================================================================


def w_denominator(rs: RootSystem, grading: NilpotentGrading, depth=None) -> GradedSeries:
    """
    R^W on h^f, real: the theta11 factors come with (-i)^{|Delta0+|}.

    Raises:
        SquareRootNotSeriesError: the factor under the square root is not the
            square of an integral series
    """
    depth = settings.ORDER if depth is None else depth
    series_grading = grading.series_grading
    twice_eta = 3 * rs.rank - grading.dim_g0 - grading.dim_g_half

    form = ThetaProductForm(
        grading.hf_rank,
        Prefactor(
            tuple(Fraction(0) for _ in range(grading.hf_rank)),
            unit=3 * len(grading.delta_zero_plus),
        ),
        tuple(theta11_factor(1, grading.restrict(a)) for a in grading.delta_zero_plus)
        + ((eta_factor(1, twice_eta // 2),) if twice_eta // 2 else ()),
    )
    result = evaluate_product_form(form, depth, grading=series_grading)

    if twice_eta % 2 or grading.delta_half:
        radicand = power(expand_eta(1, depth, grading=series_grading), twice_eta % 2)
        for alpha in grading.delta_half:
            radicand = mul(radicand, expand_theta01(1, grading.restrict(alpha), 0, depth, grading=series_grading))
        root = sqrt_series(radicand)
        if any(c.denominator != 1 for _, c in root.items()):
            raise SquareRootNotSeriesError("the Delta_1/2 factor is not the square of an integral series")
        result = mul(result, root)
    return result


def direct_product_form(d: AdmissibleDescriptor, grading: NilpotentGrading) -> ThetaProductForm:
    """Numerator of the direct route, on h^f."""
    rs = d.root_system
    u = d.u
    K = Fraction(rs.h_dual, u)
    shift = tuple(b - x for b, x in zip(d.beta, grading.x))
    factors = []
    eta_exp = 3 * rs.rank - rs.dim
    if eta_exp % 2:
        raise InvalidInputError("3l - dim g must be even")
    if eta_exp:
        factors.append(eta_factor(u, eta_exp // 2))
    scalar = Fraction(1)
    for alpha in rs.positive_roots:
        gamma = d.y.act(alpha)
        c = rs.inner(gamma, shift)
        if not rs.is_positive_root(gamma):
            gamma, c, scalar = tuple(-v for v in gamma), -c, -scalar
        factors.append(theta11_factor(u, grading.restrict(gamma), c))
    prefactor = Prefactor(
        tuple(K * w for w in grading.restrict(d.beta)),
        q_exp=K * rs.norm_sq(shift) / 2,
        unit=3 * len(rs.positive_roots),
        scalar=scalar,
    )
    return ThetaProductForm(grading.hf_rank, prefactor, tuple(factors))


@dataclass(frozen=True)
class ReducedCharacter:
    descriptor: AdmissibleDescriptor
    grading: NilpotentGrading
    route: str
    series: GradedSeries

    @property
    def is_zero(self) -> bool:
        return self.series.is_zero()


def _substituted_numerator(
    d: AdmissibleDescriptor, grading: NilpotentGrading, depth, numerator: str
) -> GradedSeries:
    rs = d.root_system
    # tilt so that the shift by -tau x lands in the grading of h^f
    tilt = Grading(
        tuple(s - g for s, g in zip(grading.lifted_slope(), lattice.mat_vec(rs.gram, grading.x)))
    )
    if numerator == "oracle":
        series = oracle_numerator(d, depth, tilt)
    elif numerator == "product":
        series = boundary_numerator(d, depth, tilt)
    else:
        raise InvalidInputError(f"unknown numerator source {numerator!r}")
    series = shift_weight_by_tau(series, tuple(-v for v in grading.x), rs.gram)
    series = substitute_t(series, 0, None, rs.norm_sq(grading.x) / 2)
    return restrict_weights(series, grading.restriction)


def reduced_character(
    d: AdmissibleDescriptor,
    grading: NilpotentGrading,
    depth=None,
    route: Route = "direct",
    numerator: str = "product",
) -> ReducedCharacter:
    """ch_H(Lambda) on h^f by either route."""
    rs = d.root_system
    if grading.cartan != rs.cartan_type.label:
        raise InvalidInputError(f"grading for {grading.cartan} used with a {rs.cartan_type} weight")
    depth = settings.ORDER if depth is None else depth
    if route == "direct":
        top = evaluate_product_form(direct_product_form(d, grading), depth, grading=grading.series_grading)
    elif route == "substitution":
        top = _substituted_numerator(d, grading, depth, numerator)
    else:
        raise InvalidInputError(f"unknown route {route!r}")
    series = mul(top, invert(w_denominator(rs, grading, depth)))
    logger.info(
        "Computed reduced character",
        descriptor=d.label,
        grading=grading.name,
        route=route,
        terms=len(series),
    )
    return ReducedCharacter(d, grading, route, series)


def routes_agree(
    d: AdmissibleDescriptor, grading: NilpotentGrading, depth=None, numerator: str = "product"
) -> SeriesComparison:
    """The direct and substitution routes on their common known region."""
    direct = reduced_character(d, grading, depth, "direct").series
    substituted = reduced_character(d, grading, depth, "substitution", numerator).series
    result = compare(direct, substituted)
    if not result.equal and direct.unit != substituted.unit:
        logger.warning(
            "Reduction routes differ by a unit", direct=direct.unit, substituted=substituted.unit
        )
    return result


# ============================================================================
# Virasoro (sl_2, principal) checks
# ============================================================================


def central_charge_boundary_virasoro(u: int) -> Fraction:
    """
    c = 1 - 3(u-2)^2/u.

    Raises:
        InvalidUError: u is even or below 3
    """
    if u < 3 or u % 2 == 0:
        raise InvalidUError(f"the (2, u) minimal series needs odd u >= 3, got {u}", details={"u": u})
    return 1 - Fraction(3 * (u - 2) ** 2, u)


def virasoro_closed_form(u: int, j: int, depth=None) -> GradedSeries:
    """sum_n (-1)^n q^{(u(2n+1) - 2(j+1))^2/8u} / eta(tau)."""
    depth = Fraction(settings.ORDER if depth is None else depth)

    def exponent(n: int) -> Fraction:
        return Fraction((u * (2 * n + 1) - 2 * (j + 1)) ** 2, 8 * u)

    lowest = min(exponent(n) for n in range(-2, 3))
    order = lowest + depth
    terms = {}
    n_max = int(depth) + 3
    for n in range(-n_max, n_max + 1):
        e = exponent(n)
        if e < order:
            terms[(e, ())] = terms.get((e, ()), 0) + (-1) ** (n % 2)
    numerator = GradedSeries.from_terms(terms, rank=0, order=order)
    return mul(numerator, invert(expand_eta(1, depth)))


def gordon_andrews_product(u: int, j: int, depth) -> GradedSeries:
    """prod_{n >= 1, n != 0, +-(j+1) mod u} (1 - q^n)^{-1} to q^depth."""
    depth = int(depth)
    coefficients = [0] * (depth + 1)
    coefficients[0] = 1
    excluded = {0, (j + 1) % u, (-(j + 1)) % u}
    for part in range(1, depth + 1):
        if part % u in excluded:
            continue
        for total in range(part, depth + 1):
            coefficients[total] += coefficients[total - part]
    return GradedSeries.from_terms(
        {(n, ()): c for n, c in enumerate(coefficients)}, rank=0, order=depth + 1
    )


def normalize_leading(series: GradedSeries) -> GradedSeries:
    """Divide by the lowest monomial so the series starts with 1."""
    lowest = series.lowest_terms()
    if len(lowest) != 1:
        raise InvalidInputError("series has no unique leading term")
    monomial, coeff = lowest[0]
    lead = GradedSeries.monomial(
        monomial.q_exp, monomial.w_exp, coeff, rank=series.rank, grading=series.grading,
        t_exp=series.t_exp, unit=series.unit,
    )
    return mul(series, invert(lead))


def virasoro_conformal_weight(u: int, j: int) -> Fraction:
    """Leading exponent of the reduced character plus c/24."""
    leading = Fraction((u - 2 * (j + 1)) ** 2, 8 * u) - Fraction(1, 24)
    return leading + central_charge_boundary_virasoro(u) / 24
