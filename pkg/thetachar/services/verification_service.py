"""
Verification suites.

Each suite is a list of named checks; a check returns (passed, detail). The
service runs them, times each one and collects a SuiteReport. ``cap`` bounds
every depth so the whole catalogue can be run quickly.
"""

from collections.abc import Callable
from functools import partial
from time import perf_counter
from typing import Optional

import numpy as np
import structlog

from thetachar.core.config import settings
from thetachar.core.exceptions import ThetaCharError, UnknownSuiteError
from thetachar.engine.affine_weights import (
    descriptor_for_j,
    descriptor_for_p_k,
    enumerate_boundary,
)
from thetachar.engine.characters import (
    boundary_product_form,
    denominator,
    numerators_agree,
    positivity_report,
    principal_series_grading,
    sl2_boundary_product_form,
    sln_u2_check,
    substitution_identity,
    weyl_denominator_sum,
)
from thetachar.engine.modular_fusion import (
    fusion_tensor,
    s_matrix,
    sl2_fusion_closed_form,
    sl2_s_closed_form,
    sl3_fusion_closed_form,
)
from thetachar.engine.root_system import build
from thetachar.engine.series import GradedSeries, compare
from thetachar.engine.theta_forms import evaluate_product_form
from thetachar.engine.w_reduction import (
    gordon_andrews_product,
    minimal_grading,
    normalize_leading,
    principal_grading,
    reduced_character,
    routes_agree,
)
from thetachar.schemas.output import CheckResult, SuiteReport

logger = structlog.get_logger(__name__)

CheckFn = Callable[[], tuple[bool, str]]


def _depth(default: int, cap: Optional[int]) -> int:
    return default if cap is None else max(1, min(default, cap))


def _comparison(result) -> tuple[bool, str]:
    if result.equal:
        return True, f"{result.checked_terms} terms"
    first = ", ".join(f"{m}: {a} != {b}" for m, a, b in result.mismatches[:2])
    return False, f"{result.reason} {first}".strip()


# ============================================================================
# Suites
# ============================================================================


def _enumeration(cap: Optional[int]) -> list[tuple[str, CheckFn]]:
    def count(cartan: str, u: int, expected: int) -> tuple[bool, str]:
        weights = enumerate_boundary(build(cartan), u)
        distinct = len({d.weight for d in weights})
        return len(weights) == expected == distinct, f"{len(weights)} weights, expected {expected}"

    cases = [("A1", 3, 3), ("A1", 5, 5), ("A2", 2, 4), ("A2", 4, 16)]
    return [(f"{c} u={u}", partial(count, c, u, n)) for c, u, n in cases]


def _denominator(cap: Optional[int]) -> list[tuple[str, CheckFn]]:
    depth = _depth(20, cap)

    def check(cartan: str) -> tuple[bool, str]:
        rs = build(cartan)
        return _comparison(compare(denominator(rs, depth), weyl_denominator_sum(rs, depth)))

    return [(f"{c} depth={depth}", partial(check, c)) for c in ("A1", "A2", "B2", "G2")]


def _boundary_cases(cap: Optional[int], a1_depth: int, a2_depth: int):
    for u in (3, 5):
        for d in enumerate_boundary(build("A1"), u):
            yield d, _depth(a1_depth, cap)
    for u in (2, 4):
        for d in enumerate_boundary(build("A2"), u):
            yield d, _depth(a2_depth, cap)


def _oracle(cap: Optional[int]) -> list[tuple[str, CheckFn]]:
    def check(d, depth) -> tuple[bool, str]:
        return _comparison(numerators_agree(d, depth, principal_series_grading(d.root_system)))

    return [(d.label, partial(check, d, depth)) for d, depth in _boundary_cases(cap, 30, 12)]


def _sl2_product(cap: Optional[int]) -> list[tuple[str, CheckFn]]:
    depth = _depth(10, cap)

    def check(j: int) -> tuple[bool, str]:
        d = descriptor_for_j(3, j)
        literal = sl2_boundary_product_form(3, j).canonical()
        generic = boundary_product_form(d).canonical()
        if literal != generic:
            return False, f"forms differ: {literal!r} vs {generic!r}"
        grading = principal_series_grading(d.root_system)
        return _comparison(
            compare(
                evaluate_product_form(sl2_boundary_product_form(3, j), depth, grading=grading),
                evaluate_product_form(boundary_product_form(d), depth, grading=grading),
            )
        )

    return [(f"A1 u=3 j={j}", partial(check, j)) for j in range(3)]


def _substitution(cap: Optional[int]) -> list[tuple[str, CheckFn]]:
    def check(d, depth) -> tuple[bool, str]:
        return _comparison(substitution_identity(d, depth))

    return [(d.label, partial(check, d, depth)) for d, depth in _boundary_cases(cap, 20, 20)]


def _sln_u2(cap: Optional[int]) -> list[tuple[str, CheckFn]]:
    depth = _depth(12, cap)
    return [
        (f"N=3 p={p}", partial(lambda p: _comparison(sln_u2_check(3, p, depth)), p))
        for p in (0, 1)
    ]


def _positivity(cap: Optional[int]) -> list[tuple[str, CheckFn]]:
    def check(d, depth) -> tuple[bool, str]:
        violations = positivity_report(d, depth)
        if not violations:
            return True, "all multiplicities non-negative integers"
        v = violations[0]
        return False, f"{len(violations)} violations, first q^{v.q_exp} e^{v.w_exp}: {v.reason}"

    return [(d.label, partial(check, d, depth)) for d, depth in _boundary_cases(cap, 12, 6)]


def _smatrix(cap: Optional[int]) -> list[tuple[str, CheckFn]]:
    def unitary(cartan: str, u: int) -> tuple[bool, str]:
        s = s_matrix(build(cartan), u)
        return s.is_unitary() and s.is_symmetric(), f"{s.size}x{s.size}"

    def sl2_closed(u: int) -> tuple[bool, str]:
        s = s_matrix(build("A1"), u)
        labels = _sl2_labels(u)
        js = [labels[d.weight] for d in s.weights]
        expected = np.array([[sl2_s_closed_form(u, a, b) for b in js] for a in js])
        error = float(np.max(np.abs(s.entries - expected)))
        return error < 1e-12, f"max deviation {error:.3g}"

    checks = [(f"A1 u={u} closed form", partial(sl2_closed, u)) for u in (3, 5, 7)]
    checks += [
        (f"{c} u={u} unitary", partial(unitary, c, u))
        for c, u in (("A1", 3), ("A1", 5), ("A1", 7), ("A2", 2), ("A2", 4))
    ]
    return checks


def _sl2_labels(u: int) -> dict:
    """Boundary weight -> j."""
    return {descriptor_for_j(u, j).weight: j for j in range(u)}


def _sl3_labels(u: int) -> dict:
    """Boundary weight -> (p, (k1, k2)) from the parametrization by p, k1, k2."""
    labels = {}
    for p in (0, 1):
        for k1 in range(p, u + 1):
            for k2 in range(p, u + 1 - k1):
                if k1 + k2 <= u - (1 - p):
                    labels[descriptor_for_p_k(u, p, k1, k2).weight] = (p, (k1, k2))
    return labels


def _fusion(cap: Optional[int]) -> list[tuple[str, CheckFn]]:
    def sl2(u: int) -> tuple[bool, str]:
        rs = build("A1")
        tensor = fusion_tensor(rs, u)
        labels = _sl2_labels(u)
        js = [labels[d.weight] for d in s_matrix(rs, u).weights]
        n = len(js)
        bad = [
            (a, b, c)
            for a in range(n) for b in range(n) for c in range(n)
            if tensor[a, b, c] != sl2_fusion_closed_form(u, js[a], js[b], js[c])
        ]
        return not bad, f"{n ** 3} coefficients" if not bad else f"mismatch at {bad[0]}"

    def sl3(u: int) -> tuple[bool, str]:
        rs = build("A2")
        tensor = fusion_tensor(rs, u)
        by_weight = _sl3_labels(u)
        weights = s_matrix(rs, u).weights
        if any(d.weight not in by_weight for d in weights):
            return False, "a boundary weight has no (p, k1, k2) label"
        labels = [by_weight[d.weight] for d in weights]
        n = len(labels)
        bad = [
            (a, b, c)
            for a in range(n) for b in range(n) for c in range(n)
            if tensor[a, b, c] != sl3_fusion_closed_form(u, [labels[a], labels[b], labels[c]])
        ]
        return not bad, f"{n ** 3} coefficients" if not bad else f"mismatch at {bad[0]}"

    return [(f"A1 u={u}", partial(sl2, u)) for u in (3, 5)] + [
        (f"A2 u={u}", partial(sl3, u)) for u in (2, 4)
    ]


def _virasoro(cap: Optional[int]) -> list[tuple[str, CheckFn]]:
    rs = build("A1")
    grading = principal_grading(rs)

    def trivial(j: int) -> tuple[bool, str]:
        series = reduced_character(descriptor_for_j(3, j), grading, _depth(40, cap)).series
        return _comparison(compare(series, GradedSeries.one(0)))

    def vanishing(u: int) -> tuple[bool, str]:
        series = reduced_character(descriptor_for_j(u, u - 1), grading, _depth(40, cap)).series
        return series.is_zero(), f"{len(series)} nonzero terms"

    def product(j: int) -> tuple[bool, str]:
        depth = _depth(50, cap)
        series = normalize_leading(reduced_character(descriptor_for_j(5, j), grading, depth).series)
        oracle = gordon_andrews_product(5, j, depth)
        return _comparison(compare(series, oracle))

    checks = [(f"u=3 j={j} trivial", partial(trivial, j)) for j in (0, 1)]
    checks += [(f"u={u} j={u - 1} zero", partial(vanishing, u)) for u in (3, 5)]
    checks += [(f"u=5 j={j} product", partial(product, j)) for j in range(4)]
    return checks


def _reduction(cap: Optional[int]) -> list[tuple[str, CheckFn]]:
    def check(d, grading, depth) -> tuple[bool, str]:
        return _comparison(routes_agree(d, grading, depth))

    checks = []
    a1 = build("A1")
    for u in (3, 5):
        for d in enumerate_boundary(a1, u):
            checks.append((f"{d.label} principal", partial(check, d, principal_grading(a1), _depth(40, cap))))
    a2 = build("A2")
    for d in enumerate_boundary(a2, 2):
        checks.append((f"{d.label} principal", partial(check, d, principal_grading(a2), _depth(15, cap))))
        checks.append((f"{d.label} minimal", partial(check, d, minimal_grading(a2), _depth(8, cap))))
    return checks


SUITES: dict[str, Callable[[Optional[int]], list[tuple[str, CheckFn]]]] = {
    "enumeration": _enumeration,
    "denominator": _denominator,
    "oracle": _oracle,
    "sl2-product": _sl2_product,
    "eq5": _substitution,
    "example2": _sln_u2,
    "positivity": _positivity,
    "smatrix": _smatrix,
    "fusion": _fusion,
    "virasoro": _virasoro,
    "reduction": _reduction,
}


# ============================================================================
# Runner
# ============================================================================


class VerificationService:
    """Runs suites by name and reports per-check outcomes with timings."""

    @staticmethod
    def suite_names() -> list[str]:
        return list(SUITES) + ["all"]

    @staticmethod
    def run_check(suite: str, name: str, fn: CheckFn) -> CheckResult:
        start = perf_counter()
        try:
            passed, detail = fn()
        except ThetaCharError as e:
            passed, detail = False, f"{e.code}: {e.message}"
        elapsed = perf_counter() - start
        logger.info("Check finished", suite=suite, check=name, passed=passed, seconds=round(elapsed, 3))
        return CheckResult(suite=suite, name=name, passed=bool(passed), elapsed_seconds=elapsed, detail=detail)

    @classmethod
    def run_suite(
        cls, suite: str, cap: Optional[int] = None, on_result: Optional[Callable[[CheckResult], None]] = None
    ) -> SuiteReport:
        """
        Raises:
            UnknownSuiteError: suite is not registered
        """
        if suite not in SUITES:
            raise UnknownSuiteError(
                f"unknown suite {suite!r}", details={"available": ", ".join(cls.suite_names())}
            )
        report = SuiteReport(suite=suite)
        for name, fn in SUITES[suite](cap):
            result = cls.run_check(suite, name, fn)
            report.checks.append(result)
            if on_result:
                on_result(result)
        logger.info("Suite finished", suite=suite, passed=report.passed, failures=report.failures)
        return report

    @classmethod
    def run(
        cls, suite: str, cap: Optional[int] = None, on_result: Optional[Callable[[CheckResult], None]] = None
    ) -> list[SuiteReport]:
        names = list(SUITES) if suite == "all" else [suite]
        if cap is not None and cap > settings.ORDER * 10:
            logger.warning("Depth cap above ten times the default order", cap=cap, order=settings.ORDER)
        return [cls.run_suite(name, cap, on_result) for name in names]
