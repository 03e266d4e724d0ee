"""
Unit tests for boundary admissible characters and their independent checks.
"""

from fractions import Fraction

import pytest

from thetachar.engine.affine_weights import (
    descriptor_for_j,
    descriptor_for_p_k,
    enumerate_boundary,
    sln_u2_descriptor,
)
from thetachar.engine.characters import (
    boundary_character,
    boundary_product_form,
    denominator,
    integrable_character,
    numerators_agree,
    oracle_character,
    positivity_report,
    principal_series_grading,
    sl2_boundary_product_form,
    sln_u2_check,
    sln_u2_closed_form,
    substitution_identity,
    weight_multiplicities,
    weyl_denominator_sum,
)
from thetachar.engine.root_system import build
from thetachar.engine.series import compare


# ============================================================================
# TEST FIXTURES
# ============================================================================


@pytest.fixture
def sl2_vacuum():
    return descriptor_for_j(3, 0)


# ============================================================================
# DENOMINATOR
# ============================================================================


class TestDenominator:
    """Product form of R_hat against the Weyl group sum"""

    @pytest.mark.parametrize("label,depth", [("A1", 8), ("A2", 4), ("B2", 3)])
    def test_macdonald_identity(self, label, depth):
        rs = build(label)
        result = compare(denominator(rs, depth), weyl_denominator_sum(rs, depth))
        assert result.equal, result.mismatches

    def test_denominator_is_real(self, a2):
        assert denominator(a2, 2).unit == 0


# ============================================================================
# BOUNDARY CHARACTERS
# ============================================================================


class TestBoundaryCharacter:
    """Theta-quotient characters"""

    def test_normalization(self, sl2_vacuum):
        result = boundary_character(sl2_vacuum, 3)
        assert result.m_lambda == Fraction(1, 4)
        assert result.top_q == Fraction(1, 4)

    def test_leading_term_is_highest_weight(self):
        d = descriptor_for_j(3, 1)
        result = boundary_character(d, 3)
        assert result.series.coefficient(Fraction(-1, 12), d.weight.finite) == 1

    def test_vacuum_multiplicities(self, a1, sl2_vacuum):
        series = boundary_character(sl2_vacuum, 4).series
        multiplicities = weight_multiplicities(a1, series, sl2_vacuum.weight)
        expected = {(0, 0): 1, (1, 0): 1, (0, 1): 0, (1, 1): 1, (1, 2): 1}
        for key, value in expected.items():
            assert multiplicities.get(key, 0) == value, f"multiplicity at {key}"

    @pytest.mark.parametrize("j", [0, 1, 2])
    def test_sl2_closed_form_is_the_generic_form(self, j):
        assert sl2_boundary_product_form(3, j).canonical() == boundary_product_form(descriptor_for_j(3, j)).canonical()

    def test_theta_quotient_matches_weyl_sum(self):
        d = descriptor_for_j(3, 2)
        result = compare(boundary_character(d, 5).series, oracle_character(d, 5))
        assert result.equal, result.mismatches


# ============================================================================
# INDEPENDENT IDENTITIES
# ============================================================================


class TestIdentities:
    """Numerator, substitution and sl_N checks"""

    @pytest.mark.parametrize("j", [0, 1, 2])
    def test_numerators_agree_sl2(self, a1, j):
        d = descriptor_for_j(3, j)
        assert numerators_agree(d, 8, principal_series_grading(a1)).equal

    def test_numerators_agree_sl3(self, a2):
        d = descriptor_for_p_k(2, 1, 1, 1)
        assert numerators_agree(d, 3, principal_series_grading(a2)).equal

    @pytest.mark.parametrize("j", [0, 1, 2])
    def test_substitution_identity(self, j):
        assert substitution_identity(descriptor_for_j(3, j), 4).equal

    def test_substitution_negative_control(self):
        result = substitution_identity(descriptor_for_j(3, 1), 4, beta_perturbation=(2,))
        assert not result.equal, "A moved beta must break the substitution identity"

    @pytest.mark.parametrize("p", [0, 1])
    def test_sln_u2_sl3(self, p):
        assert sln_u2_check(3, p, 4).equal

    @pytest.mark.parametrize("n,p,depth", [(3, 0, 4), (3, 1, 4), (5, 0, 2)])
    def test_sln_u2_closed_form_is_the_character(self, n, p, depth):
        closed = sln_u2_closed_form(n, p, depth)
        character = boundary_character(sln_u2_descriptor(n, p), depth).series
        result = compare(closed, character)
        assert result.equal, result.mismatches
        assert result.checked_terms > 0


# ============================================================================
# POSITIVITY
# ============================================================================


class TestPositivity:
    """Characters expand with non-negative integer multiplicities"""

    @pytest.mark.parametrize("j", range(5))
    def test_sl2_u5(self, j):
        assert positivity_report(descriptor_for_j(5, j), 5) == []

    def test_sl3_u2(self, a2):
        for d in enumerate_boundary(a2, 2):
            assert positivity_report(d, 3) == [], d.label

    def test_level_one_partitions(self, a1):
        series, weight = integrable_character(a1, 1, (0,), 6)
        multiplicities = weight_multiplicities(a1, series, weight)
        for n, p_n in enumerate([1, 1, 2, 3, 5]):
            assert multiplicities.get((n, n), 0) == p_n, f"mult of Lambda_0 - {n} delta"
