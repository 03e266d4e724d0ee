"""
Unit tests for exact graded series arithmetic.
"""

import random
from fractions import Fraction

import pytest

from thetachar.core.exceptions import (
    GradingMismatchError,
    NotInvertibleError,
    SquareRootNotSeriesError,
    TExpMismatchError,
    UnitMismatchError,
)
from thetachar.engine.series import (
    GradedSeries,
    Grading,
    compare,
    invert,
    mul,
    power,
    restrict_weights,
    shift_weight_by_tau,
    sqrt_series,
    substitute_q_power,
    substitute_t,
)


# ============================================================================
# TEST FIXTURES
# ============================================================================


@pytest.fixture
def one_minus_q():
    return GradedSeries.from_terms({(0, ()): 1, (1, ()): -1}, rank=0)


@pytest.fixture
def a1_gram():
    return ((Fraction(1, 2),),)


def _random_series(seed, count=3, rank=1):
    """Exact series with half-integer q-exponents in [0, 6) and small weights"""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        pairs = [
            ((Fraction(rng.randrange(0, 12), 2), tuple(rng.randrange(-3, 4) for _ in range(rank))), rng.randrange(-5, 6))
            for _ in range(6)
        ]
        out.append(GradedSeries.from_terms(pairs, rank=rank))
    return out


@pytest.fixture
def unit_lead_pairs():
    """1 + (terms of q-degree >= 1/2) up to q^8"""
    rng = random.Random(7)
    pairs = [((Fraction(rng.randrange(1, 17), 2), (rng.randrange(-2, 3),)), rng.randrange(-4, 5)) for _ in range(14)]
    return [((0, (0,)), 1)] + pairs


# ============================================================================
# CONSTRUCTION
# ============================================================================


class TestConstruction:
    """Normalization performed by the constructors"""

    def test_repeated_monomials_add_up(self):
        pairs = [((Fraction(1, 2), (1,)), 2), ((Fraction(2, 4), (1,)), -2), ((1, (0,)), 3), ((1, (0,)), 4)]
        s = GradedSeries.from_terms(pairs, rank=1)
        assert s.coefficient(Fraction(1, 2), (1,)) == 0, "Opposite coefficients should cancel"
        assert s.coefficient(1, (0,)) == 7
        assert len(s) == 1

    def test_terms_at_or_above_order_are_dropped(self):
        s = GradedSeries.from_terms({(0, ()): 1, (2, ()): 5, (3, ()): 7}, rank=0, order=2)
        assert len(s) == 1
        assert not s.is_known(2)
        assert s.is_known(Fraction(3, 2))

    def test_unit_two_folds_into_sign(self):
        s = GradedSeries.monomial(0, (), 3, rank=0, unit=2)
        assert s.unit == 0
        assert s.coefficient(0) == -3

    def test_grading_rank_must_match(self):
        with pytest.raises(GradingMismatchError):
            GradedSeries.one(2, Grading.by_q(1))


# ============================================================================
# ARITHMETIC
# ============================================================================


class TestArithmetic:
    """Products, inverses, powers and square roots"""

    def test_geometric_series(self, one_minus_q):
        inverse = invert(one_minus_q, depth=6)
        assert inverse.order == 6
        for n in range(6):
            assert inverse.coefficient(n) == 1, f"coefficient of q^{n} should be 1"

    def test_inverse_times_series_is_one(self, one_minus_q):
        product = mul(one_minus_q, invert(one_minus_q, depth=8))
        assert compare(product, GradedSeries.one(0)).equal

    def test_single_monomial_inverts_exactly(self):
        m = GradedSeries.monomial(Fraction(1, 3), (2,), 4, rank=1)
        inverse = invert(m)
        assert inverse.order is None
        assert inverse.coefficient(Fraction(-1, 3), (-2,)) == Fraction(1, 4)

    def test_shared_lowest_grade_is_not_invertible(self):
        two_terms = GradedSeries.from_terms({(0, (1,)): 1, (0, (-1,)): 1}, rank=1)
        with pytest.raises(NotInvertibleError):
            invert(two_terms)

    def test_negative_power(self, one_minus_q):
        squared_inverse = power(one_minus_q, -2, depth=5)
        for n in range(5):
            assert squared_inverse.coefficient(n) == n + 1

    def test_sqrt_of_perfect_square(self, one_minus_q):
        root = sqrt_series(mul(one_minus_q, one_minus_q), depth=6)
        assert root.coefficient(0) == 1
        assert root.coefficient(1) == -1
        assert all(root.coefficient(n) == 0 for n in range(2, 6))

    def test_sqrt_rejects_odd_unit(self):
        with pytest.raises(SquareRootNotSeriesError):
            sqrt_series(GradedSeries.monomial(0, (), 1, rank=0, unit=1))

    def test_sqrt_rejects_non_square_lead(self):
        with pytest.raises(SquareRootNotSeriesError):
            sqrt_series(GradedSeries.from_terms({(0, ()): 2, (1, ()): 1}, rank=0))

    def test_mixed_units_do_not_add(self):
        real = GradedSeries.one(0)
        imaginary = GradedSeries.monomial(0, (), 1, rank=0, unit=1)
        with pytest.raises(UnitMismatchError):
            real + imaginary

    def test_mixed_t_exponents_do_not_add(self):
        with pytest.raises(TExpMismatchError):
            GradedSeries.one(0) + GradedSeries.monomial(0, (), 1, rank=0, t_exp=1)

    def test_gradings_must_agree(self):
        flat = GradedSeries.one(1)
        tilted = GradedSeries.one(1, Grading.of((Fraction(1, 2),)))
        with pytest.raises(GradingMismatchError):
            mul(flat, tilted)


# ============================================================================
# SUBSTITUTIONS
# ============================================================================


class TestSubstitutions:
    """Changes of variables used by the character identities"""

    def test_shift_by_tau_multiplies_by_q_power(self, a1_gram):
        s = GradedSeries.monomial(0, (1,), rank=1)
        shifted = shift_weight_by_tau(s, (1,), a1_gram)
        assert shifted.coefficient(Fraction(1, 2), (1,)) == 1
        assert shifted.grading.slope == (Fraction(-1, 2),)

    def test_shift_keeps_order(self, a1_gram):
        s = GradedSeries.from_terms({(0, (1,)): 1, (1, (0,)): 1}, rank=1, order=3)
        assert shift_weight_by_tau(s, (2,), a1_gram).order == 3

    def test_q_power_substitution(self):
        s = GradedSeries.from_terms({(Fraction(1, 2), ()): 1}, rank=0, order=1)
        scaled = substitute_q_power(s, 3)
        assert scaled.coefficient(Fraction(3, 2)) == 1
        assert scaled.order == 3

    def test_t_substitution_moves_weight_into_q(self):
        s = GradedSeries.monomial(0, (), 1, rank=0, t_exp=2)
        out = substitute_t(s, 0, None, Fraction(1, 4))
        assert out.t_exp == 0
        assert out.coefficient(Fraction(1, 2)) == 1

    def test_restriction_needs_compatible_slope(self):
        s = GradedSeries.one(2, Grading.of((1, 0)))
        with pytest.raises(GradingMismatchError):
            restrict_weights(s, [(1, 1)])

    def test_restriction_merges_weights(self):
        s = GradedSeries.from_terms({(0, (1, 0)): 1, (0, (0, 1)): 2}, rank=2)
        restricted = restrict_weights(s, [(1, 1)])
        assert restricted.coefficient(0, (1,)) == 3


# ============================================================================
# COMPARISON
# ============================================================================


class TestCompare:
    """Comparison on the common known region"""

    def test_reports_mismatch(self, one_minus_q):
        other = GradedSeries.from_terms({(0, ()): 1, (1, ()): -2}, rank=0)
        result = compare(one_minus_q, other)
        assert not result.equal
        assert result.mismatches[0][0].q_exp == 1

    def test_ignores_unknown_region(self, one_minus_q):
        truncated = GradedSeries.from_terms({(0, ()): 1}, rank=0, order=1)
        assert compare(one_minus_q, truncated).equal

    def test_t_exponent_difference_is_a_mismatch(self):
        result = compare(GradedSeries.one(0), GradedSeries.monomial(0, (), 1, rank=0, t_exp=1))
        assert not result
        assert "t-exponents" in result.reason


# ============================================================================
# ALGEBRAIC LAWS
# ============================================================================


class TestAlgebraicLaws:
    """Ring axioms and homomorphisms on seeded random series"""

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_associativity(self, seed):
        a, b, c = _random_series(seed)
        assert compare((a * b) * c, a * (b * c)).equal

    @pytest.mark.parametrize("seed", [0, 1, 2, 3])
    def test_distributivity(self, seed):
        a, b, c = _random_series(seed)
        assert compare(a * (b + c), a * b + a * c).equal

    @pytest.mark.parametrize("seed", [4, 5])
    def test_commutativity_rank_two(self, seed):
        a, b = _random_series(seed, count=2, rank=2)
        assert compare(a * b, b * a).equal

    @pytest.mark.parametrize("seed,u", [(0, 2), (1, 3), (2, 5)])
    def test_q_power_substitution_is_multiplicative(self, seed, u):
        g, h = _random_series(seed, count=2)
        lhs = substitute_q_power(g * h, u)
        rhs = substitute_q_power(g, u) * substitute_q_power(h, u)
        assert compare(lhs, rhs).equal

    @pytest.mark.parametrize("seed,u", [(3, 2), (4, 3)])
    def test_q_power_substitution_is_additive(self, seed, u):
        g, h = _random_series(seed, count=2)
        lhs = substitute_q_power(g + h, u)
        assert compare(lhs, substitute_q_power(g, u) + substitute_q_power(h, u)).equal

    def test_q_power_substitution_of_truncated_product(self, unit_lead_pairs):
        g = GradedSeries.from_terms(unit_lead_pairs, rank=1, order=5)
        h = GradedSeries.from_terms(unit_lead_pairs[:6], rank=1)
        lhs = substitute_q_power(mul(g, h), 3)
        rhs = mul(substitute_q_power(g, 3), substitute_q_power(h, 3))
        assert lhs.order == rhs.order == 15
        assert compare(lhs, rhs).equal


# ============================================================================
# TRUNCATION SOUNDNESS
# ============================================================================


class TestTruncationSoundness:
    """Known coefficients do not change when the input is known further"""

    @pytest.mark.parametrize(
        "operation",
        [
            lambda s: invert(s),
            lambda s: power(s, -2),
            lambda s: sqrt_series(s),
            lambda s: mul(s, s),
        ],
        ids=["invert", "inverse-square", "sqrt", "square"],
    )
    def test_low_order_result_is_a_prefix(self, unit_lead_pairs, operation):
        low = operation(GradedSeries.from_terms(unit_lead_pairs, rank=1, order=4))
        high = operation(GradedSeries.from_terms(unit_lead_pairs, rank=1, order=9))
        assert high.order > low.order
        result = compare(low, high.truncate(low.order))
        assert result.equal, result.mismatches
        assert result.checked_terms > 0

    def test_invert_recovers_one(self, unit_lead_pairs):
        s = GradedSeries.from_terms(unit_lead_pairs, rank=1, order=6)
        assert compare(mul(s, invert(s)), GradedSeries.one(1)).equal
