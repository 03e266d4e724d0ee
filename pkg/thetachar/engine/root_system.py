"""
Finite root systems of simple Lie algebras.

Every type is defined by the symmetric Gram matrix B of its simple roots,
normalized so that long roots have squared length 2. Weights are vectors in
fundamental-weight (omega) coordinates; the invariant form on them is

    G = D B^{-1} D,   D = diag(|alpha_i|^2 / 2)

and the simple root alpha_j is column j of the Cartan matrix
A_ij = 2 (alpha_i|alpha_j) / (alpha_i|alpha_i).
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import factorial
from typing import Optional, Sequence

import structlog

from thetachar.core.config import settings
from thetachar.core.exceptions import (
    GroupTooLargeError,
    InvalidInputError,
    UnsupportedTypeError,
    ZeroRootError,
)
from thetachar.engine.lattice import Matrix, Vector, inverse, mat_vec, vector

logger = structlog.get_logger(__name__)

IntMatrix = tuple[tuple[int, ...], ...]

_LABEL = re.compile(r"^\s*([A-Ga-g])\s*(\d+)\s*$")

# Dual Coxeter numbers and Weyl group orders (closed forms per family).
_H_DUAL = {"E6": 12, "E7": 18, "E8": 30, "F4": 9, "G2": 4}
_WEYL_ORDER_EXCEPTIONAL = {"E6": 51840, "E7": 2903040, "E8": 696729600, "F4": 1152, "G2": 12}


@dataclass(frozen=True)
class CartanType:
    """A Cartan type such as A2 or G2."""

    family: str
    rank: int

    @classmethod
    def parse(cls, label: str) -> "CartanType":
        match = _LABEL.match(label or "")
        if not match:
            raise UnsupportedTypeError(f"cannot parse Cartan type {label!r}")
        ct = cls(match.group(1).upper(), int(match.group(2)))
        ct.validate()
        return ct

    def validate(self) -> None:
        f, n = self.family, self.rank
        ok = (
            (f == "A" and n >= 1)
            or (f in ("B", "C") and n >= 2)
            or (f == "D" and n >= 4)
            or (f == "E" and n in (6, 7, 8))
            or (f == "F" and n == 4)
            or (f == "G" and n == 2)
        )
        if not ok:
            raise UnsupportedTypeError(f"unsupported Cartan type {self.label}")

    @property
    def label(self) -> str:
        return f"{self.family}{self.rank}"

    def __str__(self) -> str:
        return self.label

    @property
    def h_dual(self) -> int:
        f, n = self.family, self.rank
        if f == "A":
            return n + 1
        if f == "B":
            return 2 * n - 1
        if f == "C":
            return n + 1
        if f == "D":
            return 2 * n - 2
        return _H_DUAL[self.label]

    @property
    def weyl_order(self) -> int:
        f, n = self.family, self.rank
        if f == "A":
            return factorial(n + 1)
        if f in ("B", "C"):
            return 2**n * factorial(n)
        if f == "D":
            return 2 ** (n - 1) * factorial(n)
        return _WEYL_ORDER_EXCEPTIONAL[self.label]


def simple_gram(ct: CartanType) -> Matrix:
    """Symmetric Gram matrix of the simple roots (Bourbaki numbering)."""
    n = ct.rank
    B = [[Fraction(0)] * n for _ in range(n)]

    def link(i: int, j: int, value: Fraction) -> None:
        B[i][j] = B[j][i] = value

    f = ct.family
    if f in ("A", "B", "D", "E"):
        for i in range(n):
            B[i][i] = Fraction(2)
    if f == "A":
        for i in range(n - 1):
            link(i, i + 1, Fraction(-1))
    elif f == "B":
        for i in range(n - 1):
            link(i, i + 1, Fraction(-1))
        B[n - 1][n - 1] = Fraction(1)
    elif f == "C":
        for i in range(n - 1):
            B[i][i] = Fraction(1)
        B[n - 1][n - 1] = Fraction(2)
        for i in range(n - 2):
            link(i, i + 1, Fraction(-1, 2))
        link(n - 2, n - 1, Fraction(-1))
    elif f == "D":
        for i in range(n - 2):
            link(i, i + 1, Fraction(-1))
        link(n - 3, n - 1, Fraction(-1))
    elif f == "E":
        # chain 1-3-4-5-...-n with node 2 attached to node 4
        chain = [0, 2] + list(range(3, n))
        for a, b in zip(chain, chain[1:]):
            link(a, b, Fraction(-1))
        link(1, 3, Fraction(-1))
    elif f == "F":
        for i, v in enumerate([2, 2, 1, 1]):
            B[i][i] = Fraction(v)
        link(0, 1, Fraction(-1))
        link(1, 2, Fraction(-1))
        link(2, 3, Fraction(-1, 2))
    elif f == "G":
        B[0][0], B[1][1] = Fraction(2, 3), Fraction(2)
        link(0, 1, Fraction(-1))
    return tuple(tuple(row) for row in B)


@dataclass(frozen=True)
class WeylElement:
    """
    Element of the finite Weyl group.

    ``word`` lists 1-based simple reflection indices, leftmost acting last;
    ``matrix`` is the integer action on omega coordinates.
    """

    word: tuple[int, ...]
    matrix: IntMatrix
    sign: int

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def is_identity(self) -> bool:
        return not self.word

    def act(self, weight: Sequence) -> Vector:
        return mat_vec(self.matrix, weight)

    def __repr__(self) -> str:
        return f"WeylElement({'s' + '.s'.join(map(str, self.word)) if self.word else '1'})"


def _matmul(a: IntMatrix, b: IntMatrix) -> IntMatrix:
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


class RootSystem:
    """
    Root datum of one simple Lie algebra, built by ``build``.

    Attributes are computed once; instances are shared through an LRU cache
    and must be treated as read-only.
    """

    def __init__(self, cartan_type: CartanType):
        self.cartan_type = cartan_type
        self.rank = n = cartan_type.rank
        self.simple_gram = simple_gram(cartan_type)
        B = self.simple_gram

        self.cartan_matrix: Matrix = tuple(
            tuple(2 * B[i][j] / B[i][i] for j in range(n)) for i in range(n)
        )
        d = [B[i][i] / 2 for i in range(n)]
        b_inv = inverse(B)
        self.gram: Matrix = tuple(tuple(d[i] * b_inv[i][j] * d[j] for j in range(n)) for i in range(n))
        self._cartan_inverse = inverse(self.cartan_matrix)

        self.simple_roots: tuple[Vector, ...] = tuple(
            tuple(self.cartan_matrix[i][j] for i in range(n)) for j in range(n)
        )
        # fundamental coweights x_i with (x_i|alpha_j) = delta_ij span Q*
        self.q_star_basis: tuple[Vector, ...] = tuple(
            tuple(Fraction(2) / B[i][i] if k == i else Fraction(0) for k in range(n)) for i in range(n)
        )
        self.simple_coroots: tuple[Vector, ...] = tuple(
            tuple(2 * x / B[i][i] for x in self.simple_roots[i]) for i in range(n)
        )
        self.rho: Vector = tuple(Fraction(1) for _ in range(n))

        self._build_roots()
        lengths = {self.norm_sq(a) for a in self.simple_roots}
        self.r_dual = int(max(lengths) / min(lengths))
        self.h_dual = cartan_type.h_dual
        self.coxeter_number = int(self.height(self.theta)) + 1
        self.dim = n + 2 * len(self.positive_roots)
        self.height_covector: Vector = tuple(sum(self._cartan_inverse[i][j] for i in range(n)) for j in range(n))

    # ------------------------------------------------------------------
    # Roots
    # ------------------------------------------------------------------

    def _build_roots(self) -> None:
        seen = set(self.simple_roots)
        frontier = list(self.simple_roots)
        while frontier:
            nxt = []
            for root in frontier:
                for i in range(self.rank):
                    image = self.simple_reflect(root, i)
                    if image not in seen:
                        seen.add(image)
                        nxt.append(image)
            frontier = nxt
        positive = [r for r in seen if all(c >= 0 for c in self.root_coordinates(r))]
        self.positive_roots: tuple[Vector, ...] = tuple(
            sorted(positive, key=lambda r: (self.height(r), tuple(self.root_coordinates(r))))
        )
        self._positive_set = frozenset(self.positive_roots)
        self.roots: tuple[Vector, ...] = self.positive_roots + tuple(
            tuple(-x for x in r) for r in self.positive_roots
        )
        self._root_set = frozenset(self.roots)
        self.theta: Vector = max(
            (r for r in self.positive_roots if self.norm_sq(r) == 2), key=self.height
        )

    def is_root(self, mu: Sequence) -> bool:
        return tuple(mu) in self._root_set

    def is_positive_root(self, mu: Sequence) -> bool:
        return tuple(mu) in self._positive_set

    def root_coordinates(self, mu: Sequence) -> Vector:
        """Coefficients of mu in the basis of simple roots."""
        return mat_vec(self._cartan_inverse, vector(mu))

    def height(self, mu: Sequence) -> Fraction:
        return sum(self.root_coordinates(mu), Fraction(0))

    # ------------------------------------------------------------------
    # Invariant form
    # ------------------------------------------------------------------

    def inner(self, mu: Sequence, nu: Sequence) -> Fraction:
        g = self.gram
        n = self.rank
        return sum(
            (Fraction(mu[i]) * g[i][j] * Fraction(nu[j]) for i in range(n) for j in range(n) if mu[i] and nu[j]),
            Fraction(0),
        )

    def norm_sq(self, mu: Sequence) -> Fraction:
        return self.inner(mu, mu)

    def coroot(self, alpha: Sequence) -> Vector:
        norm = self.norm_sq(alpha)
        if norm == 0:
            raise ZeroRootError("coroot of the zero vector")
        return tuple(2 * Fraction(x) / norm for x in alpha)

    def pairing(self, mu: Sequence, alpha: Sequence) -> Fraction:
        """<mu, alpha^vee> = 2 (mu|alpha) / (alpha|alpha)."""
        return self.inner(mu, self.coroot(alpha))

    def reflect(self, mu: Sequence, alpha: Sequence) -> Vector:
        c = self.pairing(mu, alpha)
        return tuple(Fraction(m) - c * Fraction(a) for m, a in zip(mu, alpha))

    def simple_reflect(self, mu: Sequence, i: int) -> Vector:
        """s_i mu = mu - mu_i alpha_i (0-based i)."""
        c = Fraction(mu[i])
        return tuple(Fraction(m) - c * a for m, a in zip(mu, self.simple_roots[i]))

    def in_dual_lattice(self, beta: Sequence) -> bool:
        """beta in Q* = {(beta|alpha) in Z for all roots alpha}."""
        return all(self.inner(beta, a).denominator == 1 for a in self.simple_roots)

    def from_q_star(self, coefficients: Sequence[int]) -> Vector:
        n = self.rank
        return tuple(
            sum((Fraction(c) * self.q_star_basis[k][i] for k, c in enumerate(coefficients)), Fraction(0))
            for i in range(n)
        )

    # ------------------------------------------------------------------
    # Weyl group
    # ------------------------------------------------------------------

    @cached_property
    def _generators(self) -> tuple[IntMatrix, ...]:
        n = self.rank
        gens = []
        for i in range(n):
            alpha = self.simple_roots[i]
            gens.append(
                tuple(
                    tuple(int((1 if r == c else 0) - (alpha[r] if c == i else 0)) for c in range(n))
                    for r in range(n)
                )
            )
        return tuple(gens)

    @property
    def identity(self) -> WeylElement:
        n = self.rank
        return WeylElement((), tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), 1)

    def element(self, word: Sequence[int]) -> WeylElement:
        """Weyl element s_{w1} s_{w2} ... from a 1-based word."""
        result = self.identity.matrix
        for index in reversed(tuple(word)):
            if not 1 <= index <= self.rank:
                raise InvalidInputError(f"simple reflection index {index} out of range 1..{self.rank}")
            result = _matmul(self._generators[index - 1], result)
        return WeylElement(tuple(word), result, (-1) ** len(word))

    def weyl_elements(self, bound: Optional[int] = None) -> tuple[WeylElement, ...]:
        """
        All Weyl group elements, shortest words first.

        Raises:
            GroupTooLargeError: |W| exceeds ``bound`` (default settings.WEYL_GROUP_BOUND)
        """
        bound = settings.WEYL_GROUP_BOUND if bound is None else bound
        order = self.cartan_type.weyl_order
        if order > bound:
            raise GroupTooLargeError(
                f"|W({self.cartan_type})| = {order} exceeds the enumeration bound {bound}",
                details={"order": order, "bound": bound},
            )
        return self._weyl_elements

    @cached_property
    def _weyl_elements(self) -> tuple[WeylElement, ...]:
        identity = self.identity
        seen = {identity.matrix: identity}
        frontier = [identity]
        while frontier:
            nxt = []
            for w in frontier:
                for i, gen in enumerate(self._generators):
                    m = _matmul(gen, w.matrix)
                    if m not in seen:
                        element = WeylElement((i + 1,) + w.word, m, -w.sign)
                        seen[m] = element
                        nxt.append(element)
            frontier = nxt
        logger.debug("Enumerated Weyl group", cartan=str(self.cartan_type), order=len(seen))
        return tuple(seen.values())

    def weyl_act(self, w: WeylElement, mu: Sequence) -> Vector:
        return w.act(mu)

    def reflection_element(self, alpha: Sequence) -> WeylElement:
        """The Weyl element r_alpha as a (shortest) word."""
        target = tuple(self.reflect(w, alpha) for w in self.q_star_basis)
        for element in self.weyl_elements():
            if tuple(element.act(w) for w in self.q_star_basis) == target:
                return element
        raise InvalidInputError(f"{tuple(alpha)} is not a root of {self.cartan_type}")

    def __repr__(self) -> str:
        return f"RootSystem({self.cartan_type})"


@lru_cache(maxsize=32)
def _build(label: str) -> RootSystem:
    rs = RootSystem(CartanType.parse(label))
    logger.debug(
        "Built root system",
        cartan=label,
        positive_roots=len(rs.positive_roots),
        h_dual=rs.h_dual,
        r_dual=rs.r_dual,
    )
    return rs


def build(cartan: "str | CartanType") -> RootSystem:
    """Cached root system for a Cartan label such as "A2"."""
    label = cartan.label if isinstance(cartan, CartanType) else CartanType.parse(cartan).label
    return _build(label)


def inner(rs: RootSystem, mu: Sequence, nu: Sequence) -> Fraction:
    return rs.inner(mu, nu)


def coroot(rs: RootSystem, alpha: Sequence) -> Vector:
    return rs.coroot(alpha)


def weyl_elements(rs: RootSystem, bound: Optional[int] = None) -> tuple[WeylElement, ...]:
    return rs.weyl_elements(bound)


def weyl_act(w: WeylElement, mu: Sequence) -> Vector:
    return w.act(mu)


def dual_lattice_basis(rs: RootSystem) -> tuple[Vector, ...]:
    """Basis of Q* = {h : (h|alpha) in Z for every root}, the fundamental coweights."""
    return rs.q_star_basis
