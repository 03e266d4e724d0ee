"""
Unit tests for finite root systems and Weyl groups.
"""

import random
from fractions import Fraction

import pytest

from thetachar.core.exceptions import (
    GroupTooLargeError,
    InvalidInputError,
    UnsupportedTypeError,
    ZeroRootError,
)
from thetachar.engine.root_system import CartanType, build, dual_lattice_basis


# ============================================================================
# CARTAN TYPES
# ============================================================================


class TestCartanType:
    """Parsing and closed-form invariants"""

    @pytest.mark.parametrize("label", ["A1", "a2", " B2 ", "C3", "D4", "E6", "F4", "G2"])
    def test_supported_labels(self, label):
        assert CartanType.parse(label).label == label.strip().upper()

    @pytest.mark.parametrize("label", ["D3", "B1", "E9", "X2", "", "A"])
    def test_unsupported_labels(self, label):
        with pytest.raises(UnsupportedTypeError):
            build(label)

    @pytest.mark.parametrize(
        "label,order", [("A1", 2), ("A2", 6), ("A3", 24), ("B2", 8), ("C3", 48), ("G2", 12), ("F4", 1152)]
    )
    def test_weyl_group_order(self, label, order):
        assert CartanType.parse(label).weyl_order == order


# ============================================================================
# ROOTS
# ============================================================================


class TestRoots:
    """Root data derived from the Gram matrix"""

    @pytest.mark.parametrize("label,count", [("A1", 1), ("A2", 3), ("B2", 4), ("G2", 6), ("C3", 9)])
    def test_positive_root_count(self, label, count):
        assert len(build(label).positive_roots) == count

    @pytest.mark.parametrize("label", ["A1", "A2", "A3", "B2", "C3", "G2"])
    def test_dual_coxeter_from_rho_and_theta(self, label):
        rs = build(label)
        assert rs.h_dual == rs.inner(rs.rho, rs.theta) + 1

    @pytest.mark.parametrize("label,r_dual", [("A2", 1), ("B2", 2), ("C3", 2), ("G2", 3)])
    def test_lacety(self, label, r_dual):
        assert build(label).r_dual == r_dual

    def test_theta_is_long(self, g2):
        assert g2.norm_sq(g2.theta) == 2

    def test_simple_roots_are_cartan_columns(self, a2):
        assert a2.simple_roots == ((2, -1), (-1, 2))

    def test_a1_gram(self, a1):
        assert a1.gram == ((Fraction(1, 2),),)
        assert a1.theta == (2,)

    def test_reflection_negates_root(self, b2):
        for alpha in b2.positive_roots:
            assert b2.reflect(alpha, alpha) == tuple(-x for x in alpha)

    def test_zero_coroot(self, a2):
        with pytest.raises(ZeroRootError):
            a2.coroot((0, 0))

    def test_dual_lattice(self, a1):
        assert a1.in_dual_lattice((1,))
        assert not a1.in_dual_lattice((Fraction(1, 2),))

    def test_q_star_basis_pairs_to_delta(self, g2):
        for i, x in enumerate(g2.q_star_basis):
            for j, alpha in enumerate(g2.simple_roots):
                assert g2.inner(x, alpha) == (1 if i == j else 0)

    def test_dual_lattice_basis_a1(self, a1):
        # alpha_1 / 2 = omega_1
        assert dual_lattice_basis(a1) == ((1,),)
        assert not a1.in_dual_lattice((Fraction(2, 3),))

    @pytest.mark.parametrize("label", ["A1", "A2", "A3", "B2", "C3", "G2"])
    def test_dual_lattice_basis_pairs_integrally_with_roots(self, label):
        rs = build(label)
        for h in dual_lattice_basis(rs):
            assert rs.in_dual_lattice(h)
            assert all(rs.inner(h, alpha).denominator == 1 for alpha in rs.roots)

    def test_sl3_labels_lie_in_dual_lattice(self, a2):
        for k1 in range(-3, 4):
            for k2 in range(-3, 4):
                assert a2.in_dual_lattice(a2.from_q_star((-k1, -k2)))


# ============================================================================
# WEYL GROUP
# ============================================================================


class TestWeylGroup:
    """Enumeration and words"""

    @pytest.mark.parametrize("label", ["A1", "A2", "B2", "G2"])
    def test_enumeration_matches_order(self, label):
        rs = build(label)
        assert len(rs.weyl_elements()) == rs.cartan_type.weyl_order

    def test_bound_is_enforced(self, a2):
        with pytest.raises(GroupTooLargeError):
            a2.weyl_elements(bound=5)

    def test_signs_are_parity_of_length(self, b2):
        assert all(w.sign == (-1) ** w.length for w in b2.weyl_elements())

    def test_element_from_word(self, a2):
        w = a2.element((1, 2))
        assert w.act(a2.rho) == a2.simple_reflect(a2.simple_reflect(a2.rho, 1), 0)

    def test_bad_word_index(self, a2):
        with pytest.raises(InvalidInputError):
            a2.element((3,))

    def test_reflection_in_theta(self, a2):
        r_theta = a2.reflection_element(a2.theta)
        assert r_theta.length == 3
        assert r_theta.act(a2.theta) == (-1, -1)

    @pytest.mark.parametrize("label", ["A2", "B2", "G2"])
    def test_form_is_weyl_invariant(self, label):
        rs = build(label)
        rng = random.Random(11)
        for _ in range(5):
            mu = tuple(Fraction(rng.randrange(-6, 7), rng.randrange(1, 4)) for _ in range(rs.rank))
            nu = tuple(Fraction(rng.randrange(-6, 7), rng.randrange(1, 4)) for _ in range(rs.rank))
            for w in rs.weyl_elements():
                assert rs.inner(w.act(mu), w.act(nu)) == rs.inner(mu, nu), f"{w!r} moves the form"

    @pytest.mark.parametrize("label", ["A2", "B2", "G2"])
    def test_weyl_group_permutes_roots(self, label):
        rs = build(label)
        roots = set(rs.roots)
        for w in rs.weyl_elements():
            assert {w.act(alpha) for alpha in rs.roots} == roots
