"""
Normalized characters of boundary admissible modules as theta quotients.

For a boundary descriptor (u, beta, y) at level k = h∨/u - h∨:

    ch_Lambda = e^{2 pi i k t} e^{(h∨/u) beta} q^{(h∨/2u)|beta|^2}
                * (eta(u tau)/eta(tau))^{l - |Delta+|}
                * prod_{alpha>0} theta11(u tau, y(alpha)(z + tau beta)) / theta11(tau, alpha(z))

and the affine denominator

    R_hat = (-i)^{|Delta+|} e^{2 pi i h∨ t} eta(tau)^{l - |Delta+|} prod_{alpha>0} theta11(tau, alpha(z)).

Independent checks come from the integral Weyl group sum for the numerator
R_hat * ch_Lambda (the Macdonald identity being its u = 1, Lambda = 0 case).
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, floor, sqrt
from typing import Optional, Sequence

import structlog

from thetachar.core.config import settings
from thetachar.core.exceptions import InvalidInputError
from thetachar.engine import lattice
from thetachar.engine.affine_weights import (
    AdmissibleDescriptor,
    AffineWeight,
    descriptor_for_j,
    m_normalization,
    sln_u2_descriptor,
    top_exponent,
)
from thetachar.engine.lattice import Vector, vector
from thetachar.engine.root_system import RootSystem, WeylElement, build
from thetachar.engine.series import (
    GradedSeries,
    Grading,
    SeriesComparison,
    compare,
    invert,
    mul,
    shift_weight_by_tau,
    substitute_q_power,
    substitute_t,
    weyl_transform,
)
from thetachar.engine.theta_forms import (
    Prefactor,
    ThetaProductForm,
    eta_factor,
    evaluate_product_form,
    theta01_factor,
    theta11_factor,
)

logger = structlog.get_logger(__name__)


def principal_series_grading(rs: RootSystem) -> Grading:
    """grade(q^a e^mu) = a - ht(mu)/h; characters become power series in e^{-alpha_i}."""
    h = rs.coxeter_number
    return Grading(tuple(-x / h for x in rs.height_covector))


# ============================================================================
# Product forms
# ============================================================================


def denominator_form(rs: RootSystem) -> ThetaProductForm:
    """The affine denominator R_hat as a product form."""
    n_pos = len(rs.positive_roots)
    prefactor = Prefactor(
        tuple(Fraction(0) for _ in range(rs.rank)), t_exp=Fraction(rs.h_dual), unit=3 * n_pos
    )
    factors = []
    if rs.rank != n_pos:
        factors.append(eta_factor(1, rs.rank - n_pos))
    factors.extend(theta11_factor(1, alpha) for alpha in rs.positive_roots)
    return ThetaProductForm(rs.rank, prefactor, tuple(factors))


def boundary_product_form(d: AdmissibleDescriptor) -> ThetaProductForm:
    """
    ch_Lambda as a theta quotient.

    A factor theta11(u tau, y(alpha) ...) with y(alpha) < 0 is rewritten with
    -y(alpha) using oddness; the sign goes into the prefactor.
    """
    rs = d.root_system
    u = d.u
    K = Fraction(rs.h_dual, u)
    n_pos = len(rs.positive_roots)
    scalar = Fraction(1)
    factors = []
    if rs.rank != n_pos:
        e = rs.rank - n_pos
        factors += [eta_factor(u, e), eta_factor(1, -e)]
    for alpha in rs.positive_roots:
        gamma = d.y.act(alpha)
        c = rs.inner(gamma, d.beta)
        if not rs.is_positive_root(gamma):
            gamma, c, scalar = tuple(-x for x in gamma), -c, -scalar
        factors.append(theta11_factor(u, gamma, c))
        factors.append(theta11_factor(1, alpha, 0, exponent=-1))
    prefactor = Prefactor(
        tuple(K * b for b in d.beta),
        t_exp=d.level,
        q_exp=K * rs.norm_sq(d.beta) / 2,
        scalar=scalar,
    )
    return ThetaProductForm(rs.rank, prefactor, tuple(factors))


def boundary_numerator_form(d: AdmissibleDescriptor) -> ThetaProductForm:
    """R_hat * ch_Lambda with the tau-theta and eta(tau) factors cancelled."""
    return boundary_product_form(d) * denominator_form(d.root_system)


def sl2_boundary_product_form(u: int, j: int) -> ThetaProductForm:
    """
    Closed sl_2 form e^{2 pi i (k t - j z/u)} q^{j^2/2u} theta11(u tau, z - j tau)/theta11(tau, z),

    with z standing for alpha_1(z), i.e. alpha_1 = 2 omega_1.
    """
    d = descriptor_for_j(u, j)
    alpha = (Fraction(2),)
    prefactor = Prefactor(
        (Fraction(-2 * j, u),), t_exp=d.level, q_exp=Fraction(j * j, 2 * u)
    )
    factors = (theta11_factor(u, alpha, -j), theta11_factor(1, alpha, 0, exponent=-1))
    return ThetaProductForm(1, prefactor, factors)


# ============================================================================
# Series
# ============================================================================


@dataclass(frozen=True)
class CharacterResult:
    descriptor: AdmissibleDescriptor
    product_form: ThetaProductForm
    series: GradedSeries
    m_lambda: Fraction
    top_q: Fraction

    @property
    def top_weight(self) -> Vector:
        return self.descriptor.weight.finite


def denominator(rs: RootSystem, depth=None, grading: Optional[Grading] = None) -> GradedSeries:
    return evaluate_product_form(denominator_form(rs), depth, grading=grading)


def boundary_numerator(
    d: AdmissibleDescriptor, depth=None, grading: Optional[Grading] = None
) -> GradedSeries:
    return evaluate_product_form(boundary_numerator_form(d), depth, grading=grading)


def boundary_character(
    d: AdmissibleDescriptor, depth=None, grading: Optional[Grading] = None
) -> CharacterResult:
    """ch_Lambda expanded in the principal grading unless another is given."""
    rs = d.root_system
    grading = grading if grading is not None else principal_series_grading(rs)
    form = boundary_product_form(d)
    series = evaluate_product_form(form, depth, grading=grading)
    logger.info("Computed boundary character", descriptor=d.label, terms=len(series))
    return CharacterResult(d, form, series, m_normalization(rs, d.weight), top_exponent(rs, d.weight))


def _lattice_sum_points(
    rs: RootSystem, base: Vector, step: Fraction, level: Fraction, slope: Vector, bound: Fraction
) -> list[Vector]:
    """
    Points lam = base + step*gamma, gamma in Q^vee, with
    |lam|^2/(2 level) + <slope, lam> < bound.
    """
    g_inv = lattice.inverse(rs.gram)
    sigma = lattice.mat_vec(g_inv, slope)
    p = tuple(b + level * s for b, s in zip(base, sigma))
    radius_sq = 2 * level * bound + level * level * rs.norm_sq(sigma)
    if radius_sq <= 0:
        return []
    radius = sqrt(float(radius_sq)) / float(step)
    center = tuple(-x / step for x in p)
    ranges = []
    for i in range(rs.rank):
        c_i = float(rs.inner(center, tuple(Fraction(int(i == j)) for j in range(rs.rank))))
        spread = radius * sqrt(float(rs.gram[i][i]))
        ranges.append(range(floor(c_i - spread) - 1, ceil(c_i + spread) + 2))

    points = []
    for coefficients in product(*ranges):
        gamma = tuple(
            sum((c * rs.simple_coroots[k][i] for k, c in enumerate(coefficients)), Fraction(0))
            for i in range(rs.rank)
        )
        lam = tuple(b + step * g for b, g in zip(base, gamma))
        grade = rs.norm_sq(lam) / (2 * level) + sum((s * x for s, x in zip(slope, lam)), Fraction(0))
        if grade < bound:
            points.append(lam)
    return points


def integral_weyl_sum(
    rs: RootSystem,
    top: Sequence,
    level,
    u: int = 1,
    beta: Optional[Sequence] = None,
    y: Optional[WeylElement] = None,
    depth=None,
    grading: Optional[Grading] = None,
) -> GradedSeries:
    """
    sum_{v in W, gamma in Q^vee} eps(v) e^{lam} q^{|lam|^2/(2 level)},
    lam = y(v top + level*u*gamma) + level*beta, times e^{2 pi i level t}.

    With top = rho and level = h∨/u this is R_hat * ch_Lambda for the boundary
    weight (u, beta, y); with top = lam + rho, level = k + h∨, u = 1 it is the
    Weyl-Kac numerator of an integrable weight.
    """
    level = Fraction(level)
    if level <= 0:
        raise InvalidInputError(f"the Weyl group sum needs k + h∨ > 0, got {level}")
    top = vector(top)
    beta = vector(beta) if beta is not None else tuple(Fraction(0) for _ in range(rs.rank))
    y = y if y is not None else rs.identity
    grading = grading if grading is not None else Grading.by_q(rs.rank)
    depth = Fraction(settings.ORDER if depth is None else depth)
    step = level * u
    slope = grading.slope

    def grade(lam: Vector) -> Fraction:
        return rs.norm_sq(lam) / (2 * level) + sum((s * x for s, x in zip(slope, lam)), Fraction(0))

    bases = []
    for v in rs.weyl_elements():
        image = y.act(v.act(top))
        bases.append((v.sign, tuple(x + level * b for x, b in zip(image, beta))))

    # the identity term bounds the lowest grade from above
    bound = grade(bases[0][1]) + 1
    lowest = min(
        grade(lam)
        for _, base in bases
        for lam in _lattice_sum_points(rs, base, step, level, slope, bound)
    )
    order = lowest + depth

    terms: dict = {}
    for sign, base in bases:
        for lam in _lattice_sum_points(rs, base, step, level, slope, order):
            key = (rs.norm_sq(lam) / (2 * level), lam)
            terms[key] = terms.get(key, 0) + sign
    return GradedSeries.from_terms(terms, rank=rs.rank, order=order, grading=grading, t_exp=level)


def weyl_denominator_sum(rs: RootSystem, depth=None, grading: Optional[Grading] = None) -> GradedSeries:
    """Macdonald's sum side of R_hat (the u = 1, Lambda = 0 Weyl group sum)."""
    return integral_weyl_sum(rs, rs.rho, rs.h_dual, 1, None, None, depth, grading)


def oracle_numerator(
    d: AdmissibleDescriptor, depth=None, grading: Optional[Grading] = None
) -> GradedSeries:
    rs = d.root_system
    level = Fraction(rs.h_dual, d.u)
    return integral_weyl_sum(rs, rs.rho, level, d.u, d.beta, d.y, depth, grading)


def oracle_character(
    d: AdmissibleDescriptor, depth=None, grading: Optional[Grading] = None
) -> GradedSeries:
    """ch_Lambda = (Weyl group sum) / R_hat, independent of the theta quotient."""
    rs = d.root_system
    grading = grading if grading is not None else principal_series_grading(rs)
    numerator = oracle_numerator(d, depth, grading)
    return mul(numerator, invert(denominator(rs, depth, grading)))


def numerators_agree(
    d: AdmissibleDescriptor, depth=None, grading: Optional[Grading] = None
) -> SeriesComparison:
    """Theta-product numerator R_hat*ch_Lambda versus the Weyl group sum."""
    product_side = boundary_numerator(d, depth, grading)
    sum_side = oracle_numerator(d, depth, grading)
    return compare(product_side, sum_side)


def integrable_character(
    rs: RootSystem, level: int, finite_weight: Sequence, depth=None
) -> tuple[GradedSeries, AffineWeight]:
    """Character of the integrable module of highest weight finite_weight + level*Lambda_0."""
    weight = AffineWeight.of(finite_weight, level)
    grading = principal_series_grading(rs)
    top = tuple(x + r for x, r in zip(weight.finite, rs.rho))
    numerator = integral_weyl_sum(rs, top, level + rs.h_dual, 1, None, None, depth, grading)
    denominator_series = denominator(rs, depth, grading)
    return mul(numerator, invert(denominator_series)), weight


def substitution_identity(
    d: AdmissibleDescriptor, depth=None, beta_perturbation: Optional[Sequence] = None
) -> SeriesComparison:
    """
    R_hat * ch_Lambda against R_hat(u tau, y.(z + tau beta), t/u + (z|beta)/u + tau|beta|^2/2u).

    ``beta_perturbation`` moves beta on the substitution side only (negative control).
    """
    rs = d.root_system
    u = d.u
    depth = settings.ORDER if depth is None else depth
    beta = d.beta
    if beta_perturbation is not None:
        beta = tuple(b + Fraction(p) for b, p in zip(beta, beta_perturbation))

    rhs = denominator(rs, depth)
    rhs = substitute_q_power(rhs, u)
    rhs = weyl_transform(rhs, d.y.matrix)
    rhs = shift_weight_by_tau(rhs, beta, rs.gram)
    rhs = substitute_t(rhs, Fraction(1, u), tuple(b / u for b in beta), rs.norm_sq(beta) / (2 * u))

    lhs = evaluate_product_form(boundary_numerator_form(d), u * depth, grading=rhs.grading)
    result = compare(lhs, rhs)
    logger.info(
        "Checked substitution identity",
        descriptor=d.label,
        equal=result.equal,
        checked_terms=result.checked_terms,
    )
    return result


# ============================================================================
# sl_N at u = 2
# ============================================================================


def _a_series_roots(n: int) -> list[tuple[int, int, Vector]]:
    """Positive roots alpha_i + ... + alpha_j of sl_n as (i, j, omega coordinates)."""
    rs = build(f"A{n - 1}")
    roots = []
    for i in range(1, n):
        for j in range(i, n):
            coords = [Fraction(0)] * (n - 1)
            for m in range(i, j + 1):
                for r in range(n - 1):
                    coords[r] += rs.simple_roots[m - 1][r]
            roots.append((i, j, tuple(coords)))
    return roots


def sln_u2_product_form(n: int, p: int) -> ThetaProductForm:
    """
    Character of -(N/2)Lambda_p for sl_N, N odd:

    i^{p(N-p)} e^{-pi i N t} (eta(2tau)/eta(tau))^{-(N-1)(N-2)/2}
      * prod_{alpha not containing alpha_p} theta11(2tau, alpha)
      * prod_{alpha containing alpha_p} theta01(2tau, alpha)
      / prod_alpha theta11(tau, alpha)
    """
    sln_u2_descriptor(n, p)  # validates N and p
    e = -(n - 1) * (n - 2) // 2
    prefactor = Prefactor(
        tuple(Fraction(0) for _ in range(n - 1)), t_exp=Fraction(-n, 2), unit=p * (n - p)
    )
    factors = [eta_factor(2, e), eta_factor(1, -e)]
    for i, j, alpha in _a_series_roots(n):
        if i <= p <= j:
            factors.append(theta01_factor(2, alpha))
        else:
            factors.append(theta11_factor(2, alpha))
        factors.append(theta11_factor(1, alpha, 0, exponent=-1))
    return ThetaProductForm(n - 1, prefactor, tuple(factors))


def sln_u2_closed_form(n: int, p: int, depth=None, grading: Optional[Grading] = None) -> GradedSeries:
    rs = build(f"A{n - 1}")
    grading = grading if grading is not None else principal_series_grading(rs)
    return evaluate_product_form(sln_u2_product_form(n, p), depth, grading=grading)


def sln_u2_check(n: int, p: int, depth=None) -> SeriesComparison:
    """Closed form times R_hat against the generic numerator for beta = -omega_p."""
    rs = build(f"A{n - 1}")
    closed = sln_u2_product_form(n, p) * denominator_form(rs)
    generic = boundary_numerator_form(sln_u2_descriptor(n, p))
    return compare(evaluate_product_form(closed, depth), evaluate_product_form(generic, depth))


# ============================================================================
# Positivity
# ============================================================================


@dataclass(frozen=True)
class PositivityViolation:
    q_exp: Fraction
    w_exp: Vector
    coefficient: Fraction
    reason: str


def _relative_exponents(
    rs: RootSystem, q_exp: Fraction, w_exp: Vector, top_q: Fraction, top_w: Vector
) -> Optional[tuple[int, ...]]:
    """(n_0, ..., n_l) with q^{q_exp} e^{w_exp} = top * prod X_i^{n_i}, X_i = e^{-alpha_i}."""
    n0 = q_exp - top_q
    if n0.denominator != 1 or n0 < 0:
        return None
    combo = tuple(n0 * t - (w - tw) for t, w, tw in zip(rs.theta, w_exp, top_w))
    coords = rs.root_coordinates(combo)
    if any(c.denominator != 1 or c < 0 for c in coords):
        return None
    return (int(n0),) + tuple(int(c) for c in coords)


def weight_multiplicities(
    rs: RootSystem, series: GradedSeries, weight: AffineWeight
) -> dict[tuple[int, ...], Fraction]:
    """Coefficients keyed by exponents of e^{-alpha_0}, ..., e^{-alpha_l} below the top."""
    top_q = top_exponent(rs, weight)
    result = {}
    for monomial, coeff in series.items():
        key = _relative_exponents(rs, monomial.q_exp, monomial.w_exp, top_q, weight.finite)
        if key is not None:
            result[key] = coeff
    return result


def positivity_violations(
    rs: RootSystem, series: GradedSeries, weight: AffineWeight
) -> list[PositivityViolation]:
    top_q = top_exponent(rs, weight)
    violations = []
    for monomial, coeff in series.items():
        reason = None
        if series.unit:
            reason = "imaginary coefficient"
        elif _relative_exponents(rs, monomial.q_exp, monomial.w_exp, top_q, weight.finite) is None:
            reason = "weight outside Lambda - Q+"
        elif coeff.denominator != 1:
            reason = "non-integer multiplicity"
        elif coeff < 0:
            reason = "negative multiplicity"
        if reason:
            violations.append(PositivityViolation(monomial.q_exp, monomial.w_exp, coeff, reason))
    return violations


def positivity_report(d: AdmissibleDescriptor, depth=None) -> list[PositivityViolation]:
    """Monomials of ch_Lambda that are not non-negative integer weight multiplicities."""
    result = boundary_character(d, depth)
    violations = positivity_violations(d.root_system, result.series, d.weight)
    if violations:
        logger.warning("Positivity violations", descriptor=d.label, count=len(violations))
    return violations
