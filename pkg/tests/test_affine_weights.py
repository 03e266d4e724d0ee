"""
Unit tests for affine weights and the boundary admissible classification.
"""

from fractions import Fraction

import pytest

from thetachar.core.exceptions import (
    CriticalLevelError,
    InadmissibleDescriptorError,
    InvalidInputError,
    InvalidUError,
    NotInDualLatticeError,
)
from thetachar.engine.affine_weights import (
    AffineTransform,
    AffineWeight,
    admissibility_report,
    boundary_level,
    check_admissible,
    descriptor_for_j,
    descriptor_for_p_k,
    descriptor_labels,
    enumerate_boundary,
    m_normalization,
    make_descriptor,
    shifted_act,
    top_exponent,
    translate,
    vacuum_descriptor,
    validate_boundary_u,
)
from thetachar.engine.root_system import build


# ============================================================================
# BOUNDARY LEVELS
# ============================================================================


class TestBoundaryLevel:
    """k = h∨/u - h∨ and the coprimality conditions on u"""

    def test_level_a1(self, a1):
        assert boundary_level(a1, 3) == Fraction(-4, 3)

    def test_level_a2(self, a2):
        assert boundary_level(a2, 2) == Fraction(-3, 2)

    def test_u_one_is_level_zero(self, g2):
        assert boundary_level(g2, 1) == 0

    @pytest.mark.parametrize("label,u", [("A1", 2), ("A2", 3), ("B2", 2), ("B2", 3), ("G2", 3), ("G2", 4)])
    def test_invalid_u(self, label, u):
        with pytest.raises(InvalidUError) as exc:
            validate_boundary_u(build(label), u)
        assert "gcd" in exc.value.message

    def test_nonpositive_u(self, a1):
        with pytest.raises(InvalidUError):
            validate_boundary_u(a1, 0)


# ============================================================================
# DESCRIPTORS
# ============================================================================


class TestDescriptors:
    """Construction and validation of (u, beta, y)"""

    def test_sl2_finite_weight(self):
        d = descriptor_for_j(3, 1)
        assert d.weight.finite == (Fraction(-2, 3),)
        assert d.level == Fraction(-4, 3)

    def test_vacuum(self, a1):
        d = vacuum_descriptor(a1, 3)
        assert d.is_vacuum
        assert d.weight.finite == (0,)

    def test_j_out_of_range(self):
        with pytest.raises(InvalidInputError):
            descriptor_for_j(3, 3)

    @pytest.mark.parametrize("beta", [(-6,), (1,), (-3,)])
    def test_inadmissible_beta(self, a1, beta):
        with pytest.raises(InadmissibleDescriptorError):
            make_descriptor(a1, 3, beta)

    def test_beta_outside_dual_lattice(self, a1):
        with pytest.raises(NotInDualLatticeError):
            make_descriptor(a1, 3, (Fraction(-1, 2),))

    def test_beta_rank(self, a2):
        with pytest.raises(InvalidInputError):
            make_descriptor(a2, 2, (0,))

    def test_sl3_labels_round_trip(self):
        d = descriptor_for_p_k(2, 1, 1, 1)
        assert d.p == 1
        assert descriptor_labels(d) == (1, (1, 1))

    def test_sl3_bad_p(self):
        with pytest.raises(InvalidInputError):
            descriptor_for_p_k(2, 2, 0, 0)

    def test_descriptors_are_admissible(self, a2):
        for d in enumerate_boundary(a2, 2):
            assert check_admissible(a2, d.weight), f"{d.label} should be admissible"

    def test_negative_integral_pairing_is_not_admissible(self, a1):
        assert not check_admissible(a1, AffineWeight.of((-1,), 1))

    def test_level_minus_three_sl2_is_not_admissible(self, a1):
        weight = AffineWeight.of((0,), -3)
        assert not check_admissible(a1, weight)
        assert any("non-positive integral pairing" in r for r in admissibility_report(a1, weight))


# ============================================================================
# ENUMERATION
# ============================================================================


class TestEnumeration:
    """Counting boundary weights"""

    @pytest.mark.parametrize("u", [1, 3, 5, 7])
    def test_sl2_count_is_u(self, a1, u):
        assert len(enumerate_boundary(a1, u)) == u

    @pytest.mark.parametrize("u", [1, 2, 4])
    def test_sl3_count_is_u_squared(self, a2, u):
        assert len(enumerate_boundary(a2, u)) == u * u

    def test_vacuum_comes_first(self, a2):
        assert enumerate_boundary(a2, 2)[0].is_vacuum

    def test_sl2_matches_j_parametrization(self, a1):
        found = {d.weight for d in enumerate_boundary(a1, 5)}
        assert found == {descriptor_for_j(5, j).weight for j in range(5)}

    def test_sl3_matches_p_k_parametrization(self, a2):
        u = 2
        expected = {descriptor_for_p_k(u, 0, k1, k2).weight for k1 in range(u) for k2 in range(u - k1)}
        expected |= {
            descriptor_for_p_k(u, 1, k1, k2).weight for k1 in range(1, u + 1) for k2 in range(1, u + 1 - k1)
        }
        assert {d.weight for d in enumerate_boundary(a2, u)} == expected


# ============================================================================
# AFFINE WEYL ACTION
# ============================================================================


class TestAffineWeylAction:
    """Translations t_beta and the shifted action"""

    @pytest.mark.parametrize("label", ["A1", "A2", "B2"])
    def test_translation_fixes_delta(self, label):
        rs = build(label)
        delta = AffineWeight.of((0,) * rs.rank, 0, 1)
        for coefficients in [(1,) * rs.rank, (-2,) + (1,) * (rs.rank - 1)]:
            assert translate(rs, delta, rs.from_q_star(coefficients)) == delta

    @pytest.mark.parametrize("label", ["A2", "B2"])
    def test_translations_compose_additively(self, label):
        rs = build(label)
        weight = AffineWeight.of(tuple(Fraction(i + 1, 3) for i in range(rs.rank)), Fraction(-4, 3), 2)
        beta = rs.from_q_star((1, -1))
        beta_prime = rs.from_q_star((2, 3))
        combined = tuple(a + b for a, b in zip(beta, beta_prime))
        assert translate(rs, translate(rs, weight, beta_prime), beta) == translate(rs, weight, combined)

    def test_translation_by_zero_is_identity(self, a2):
        weight = AffineWeight.of((1, 2), Fraction(-3, 2), 5)
        assert translate(a2, weight, (0, 0)) == weight

    def test_translation_outside_dual_lattice(self, a1):
        with pytest.raises(NotInDualLatticeError):
            translate(a1, AffineWeight.of((0,), 1), (Fraction(1, 2),))

    @pytest.mark.parametrize("label,u", [("A1", 3), ("A2", 2), ("B2", 5)])
    def test_shifted_action_preserves_m(self, label, u):
        rs = build(label)
        base = AffineWeight.of((0,) * rs.rank, boundary_level(rs, u))
        expected = m_normalization(rs, base)
        for y in rs.weyl_elements():
            for coefficients in [(0,) * rs.rank, (1,) * rs.rank, (-1,) + (2,) * (rs.rank - 1)]:
                moved = shifted_act(rs, AffineTransform(rs.from_q_star(coefficients), y), base)
                assert moved.level == base.level
                assert m_normalization(rs, moved) == expected

    def test_descriptor_weight_is_shifted_vacuum(self, a2):
        for d in enumerate_boundary(a2, 2):
            vacuum = AffineWeight.of((0, 0), d.level)
            assert shifted_act(a2, d.transform, vacuum) == d.weight
# ============================================================================
# NORMALIZATION
# ============================================================================


class TestNormalization:
    """m_Lambda and the leading q-power"""

    def test_vacuum_m(self):
        d = descriptor_for_j(3, 0)
        assert m_normalization(d.root_system, d.weight) == Fraction(1, 4)

    def test_top_exponent_j1(self):
        d = descriptor_for_j(3, 1)
        assert top_exponent(d.root_system, d.weight) == Fraction(-1, 12)

    def test_level_one_vacuum(self, a1):
        assert m_normalization(a1, AffineWeight.of((0,), 1)) == Fraction(-1, 24)

    def test_critical_level(self, a1):
        with pytest.raises(CriticalLevelError):
            m_normalization(a1, AffineWeight.of((0,), -2))
