"""
Unit tests for theta/eta expansions, product forms and transformation laws.
"""

from fractions import Fraction

import pytest

from thetachar.core.exceptions import InvalidInputError
from thetachar.engine.series import GradedSeries, compare, mul, power
from thetachar.engine.theta_forms import (
    Prefactor,
    ThetaFactor,
    ThetaKind,
    ThetaProductForm,
    elliptic_transform,
    eta_factor,
    evaluate_product_form,
    expand_eta,
    expand_theta01,
    expand_theta11,
    half_period_transform,
    _window,
    theta11_factor,
)


# ============================================================================
# TEST FIXTURES
# ============================================================================


@pytest.fixture
def jacobi_cube():
    """sum_{n>=0} (-1)^n (2n+1) q^{(2n+1)^2/8}, exact"""
    terms = {(Fraction((2 * n + 1) ** 2, 8), ()): (-1) ** n * (2 * n + 1) for n in range(12)}
    return GradedSeries.from_terms(terms, rank=0)


def _binomial(q_exp, w_exp):
    """1 - q^{q_exp} e^{w_exp} as an exact rank-1 series"""
    return GradedSeries.from_terms([((0, (0,)), 1), ((q_exp, w_exp), -1)], rank=1)


def _product(factors, prefactor):
    result = prefactor
    for factor in factors:
        result = mul(result, factor)
    return result


@pytest.fixture
def theta11_product():
    """i q^{1/8} X^{1/2} prod_{n=1}^{N} (1 - q^n)(1 - X q^n)(1 - X^{-1} q^{n-1}), X = e^{(2)}"""
    factors = []
    for n in range(1, 11):
        factors += [_binomial(n, (0,)), _binomial(n, (2,)), _binomial(n - 1, (-2,))]
    return _product(factors, GradedSeries.monomial(Fraction(1, 8), (1,), rank=1, unit=1))


@pytest.fixture
def theta01_product():
    """prod_{n=1}^{N} (1 - q^n)(1 - X q^{n-1/2})(1 - X^{-1} q^{n-1/2}), X = e^{(2)}"""
    factors = []
    for n in range(1, 9):
        half = n - Fraction(1, 2)
        factors += [_binomial(n, (0,)), _binomial(half, (2,)), _binomial(half, (-2,))]
    return _product(factors, GradedSeries.one(1))


# ============================================================================
# EXPANSIONS
# ============================================================================


class TestExpansions:
    """Direct q-expansions"""

    def test_eta_euler_pentagonal(self):
        eta = expand_eta(1, 8)
        expected = {
            Fraction(1, 24): 1,
            Fraction(25, 24): -1,
            Fraction(49, 24): -1,
            Fraction(121, 24): 1,
            Fraction(169, 24): 1,
        }
        for q_exp, coeff in expected.items():
            assert eta.coefficient(q_exp) == coeff, f"coefficient of q^{q_exp}"
        assert len(eta) == len(expected)

    def test_eta_cube_is_jacobi_sum(self, jacobi_cube):
        cube = power(expand_eta(1, 10), 3)
        assert compare(cube, jacobi_cube).equal

    def test_eta_scale(self):
        assert expand_eta(3, 2).coefficient(Fraction(1, 8)) == 1

    def test_eta_rejects_bad_scale(self):
        with pytest.raises(InvalidInputError):
            expand_eta(0, 4)

    def test_theta11_leading_terms(self):
        theta = expand_theta11(1, (2,), 0, 3)
        assert theta.unit == 1
        assert theta.coefficient(Fraction(1, 8), (1,)) == 1
        assert theta.coefficient(Fraction(1, 8), (-1,)) == -1

    def test_theta11_vanishes_at_zero(self):
        assert expand_theta11(1, (0,), 0, 6).is_zero()

    def test_theta01_is_even(self):
        theta = expand_theta01(2, (2,), 0, 6)
        for monomial, coeff in theta.items():
            assert theta.coefficient(monomial.q_exp, tuple(-x for x in monomial.w_exp)) == coeff

    def test_expansions_are_memoized(self, fresh_cache):
        expand_theta11(1, (2,), 0, 5)
        expand_theta11(1, (2,), 0, 5)
        assert fresh_cache.stats()["hits"] >= 1


# ============================================================================
# TRANSFORMATION LAWS
# ============================================================================


class TestTransformations:
    """Elliptic and half-period laws"""

    @pytest.mark.parametrize("m,n", [(1, 0), (1, 1), (-1, 0), (2, 1)])
    def test_elliptic_transform(self, m, n):
        # theta11(w + n) = (-1)^n theta11(w)
        shifted = expand_theta11(1, (2,), m, 8)
        factor = elliptic_transform(m, n, (2,), 0, 1)
        moved = factor.apply(expand_theta11(1, (2,), 0, 8))
        expected = moved if n % 2 == 0 else -moved
        assert compare(shifted, expected).equal

    def test_half_period(self):
        lhs = expand_theta11(2, (2,), -1, 8)
        rhs = half_period_transform(2, (2,)).apply(expand_theta01(2, (2,), 0, 8))
        assert compare(lhs, rhs).equal


# ============================================================================
# PRODUCT FORMS
# ============================================================================


class TestProductForms:
    """Canonicalization and evaluation of symbolic products"""

    def test_factor_and_inverse_cancel(self):
        form = ThetaProductForm(
            1,
            Prefactor.identity(1),
            (theta11_factor(1, (2,)), theta11_factor(1, (2,), exponent=-1)),
        ).canonical()
        assert form.factors == ()

    def test_oddness_moves_sign_to_scalar(self):
        form = ThetaProductForm(1, Prefactor.identity(1), (theta11_factor(1, (-2,)),)).canonical()
        assert form.factors[0].arg == (2,)
        assert form.prefactor.scalar == -1

    def test_unit_two_becomes_sign(self):
        p = Prefactor((Fraction(0),), unit=2).canonical()
        assert p.unit == 0 and p.scalar == -1

    def test_rank_mismatch(self):
        with pytest.raises(InvalidInputError):
            ThetaProductForm(1, Prefactor.identity(1)) * ThetaProductForm(2, Prefactor.identity(2))

    def test_eta_factor_takes_no_argument(self):
        with pytest.raises(InvalidInputError):
            ThetaFactor(ThetaKind.ETA, 1, (1,))

    def test_evaluate_matches_direct_expansion(self):
        form = ThetaProductForm(0, Prefactor((), q_exp=Fraction(1, 2)), (eta_factor(2, 2),))
        direct = GradedSeries.monomial(Fraction(1, 2), (), rank=0)
        direct = direct * power(expand_eta(2, 6), 2)
        assert compare(evaluate_product_form(form, 6), direct).equal


# ============================================================================
# PRODUCT IDENTITIES
# ============================================================================


class TestDefiningProducts:
    """Sum expansions agree with the triple products"""

    def test_theta11_matches_product(self, theta11_product):
        theta = expand_theta11(1, (2,), 0, 8)
        result = compare(theta, theta11_product)
        assert result.equal, result.mismatches
        assert result.order == Fraction(1, 8) + 8
        assert result.checked_terms == 8

    def test_theta01_matches_product(self, theta01_product):
        theta = expand_theta01(1, (2,), 0, 6)
        result = compare(theta, theta01_product)
        assert result.equal, result.mismatches
        assert result.checked_terms == 7


# ============================================================================
# SUMMATION WINDOW
# ============================================================================


class TestSummationWindow:
    """The index range covering every term below a grade bound"""

    def test_covers_huge_indices_exactly(self):
        n0 = 10**30 + 12345
        window = _window(Fraction(1, 2), Fraction(0), Fraction(0), Fraction(n0 * n0 + 1, 2))
        assert n0 in window
        assert -n0 in window

    @pytest.mark.parametrize("a2", [Fraction(1, 2), Fraction(3, 2), Fraction(2)])
    @pytest.mark.parametrize("b1", [Fraction(0), Fraction(1, 3), Fraction(-5, 2)])
    @pytest.mark.parametrize("offset", [Fraction(0), Fraction(1, 2)])
    def test_contains_every_term_below_bound(self, a2, b1, offset):
        for bound in (Fraction(1), Fraction(7, 2), Fraction(40)):
            window = _window(a2, b1, offset, bound)
            for n in range(-200, 200):
                x = n + offset
                if a2 * x * x + b1 * x < bound:
                    assert n in window, f"n={n} missing for bound {bound}"

    def test_empty_below_minimum(self):
        assert len(_window(Fraction(1, 2), Fraction(0), Fraction(0), Fraction(0))) == 0
