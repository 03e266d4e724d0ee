"""
Serialized results: series records, fusion tables and verification reports.

Rationals are always stored as num/den integer pairs; terms are written in
ascending q-exponent, then lexicographic weight order, so JSON output is
deterministic.
"""

from typing import Optional

from pydantic import Field, computed_field

from thetachar.engine.affine_weights import AdmissibleDescriptor, make_descriptor
from thetachar.engine.root_system import build
from thetachar.engine.series import GradedSeries, Grading
from thetachar.schemas.common import BaseSchema, RationalRecord


class TermRecord(BaseSchema):
    """coeff * q^{qNum/qDen} * e^{weightCoords}."""

    q_num: int
    q_den: int = Field(gt=0)
    weight_coords: list[RationalRecord] = Field(default_factory=list)
    coeff_num: int
    coeff_den: int = Field(default=1, gt=0)


class DescriptorRecord(BaseSchema):
    cartan: str
    u: int
    beta: list[RationalRecord]
    y_word: list[int] = Field(default_factory=list)
    level: RationalRecord
    finite_weight: list[RationalRecord] = Field(default_factory=list)
    label: str = ""

    @classmethod
    def from_descriptor(cls, d: AdmissibleDescriptor) -> "DescriptorRecord":
        return cls(
            cartan=d.cartan,
            u=d.u,
            beta=[RationalRecord.of(b) for b in d.beta],
            y_word=list(d.y.word),
            level=RationalRecord.of(d.level),
            finite_weight=[RationalRecord.of(x) for x in d.weight.finite],
            label=d.label,
        )

    def to_descriptor(self) -> AdmissibleDescriptor:
        rs = build(self.cartan)
        return make_descriptor(
            rs, self.u, [b.to_fraction() for b in self.beta], rs.element(self.y_word)
        )


class RecordMeta(BaseSchema):
    algebra: str
    u: Optional[int] = None
    descriptor: Optional[DescriptorRecord] = None
    order: Optional[int] = Field(default=None, description="Requested depth")


class OutputRecord(BaseSchema):
    """
    A GradedSeries with enough metadata to rebuild it exactly.

    ``truncation_order`` is None for exact (finite) series.
    """

    meta: RecordMeta
    rank: int
    terms: list[TermRecord]
    t_exp: RationalRecord
    unit_power: int = Field(ge=0, le=1, description="Overall factor i^unitPower")
    truncation_order: Optional[RationalRecord] = None
    grading_slope: list[RationalRecord] = Field(default_factory=list)

    @classmethod
    def from_series(cls, series: GradedSeries, meta: RecordMeta) -> "OutputRecord":
        terms = []
        for monomial, coeff in series.items():
            terms.append(
                TermRecord(
                    q_num=monomial.q_exp.numerator,
                    q_den=monomial.q_exp.denominator,
                    weight_coords=[RationalRecord.of(x) for x in monomial.w_exp],
                    coeff_num=coeff.numerator,
                    coeff_den=coeff.denominator,
                )
            )
        return cls(
            meta=meta,
            rank=series.rank,
            terms=terms,
            t_exp=RationalRecord.of(series.t_exp),
            unit_power=series.unit,
            truncation_order=None if series.order is None else RationalRecord.of(series.order),
            grading_slope=[RationalRecord.of(s) for s in series.grading.slope],
        )

    def to_series(self) -> GradedSeries:
        terms = {
            (
                RationalRecord(num=t.q_num, den=t.q_den).to_fraction(),
                tuple(w.to_fraction() for w in t.weight_coords),
            ): RationalRecord(num=t.coeff_num, den=t.coeff_den).to_fraction()
            for t in self.terms
        }
        grading = (
            Grading.of([s.to_fraction() for s in self.grading_slope])
            if self.grading_slope
            else Grading.by_q(self.rank)
        )
        return GradedSeries.from_terms(
            terms,
            rank=self.rank,
            order=None if self.truncation_order is None else self.truncation_order.to_fraction(),
            grading=grading,
            t_exp=self.t_exp.to_fraction(),
            unit=self.unit_power,
        )


# ============================================================================
# Fusion
# ============================================================================


class FusionEntry(BaseSchema):
    a: int
    b: int
    c: int
    value: int


class FusionTable(BaseSchema):
    algebra: str
    u: int
    weights: list[DescriptorRecord]
    entries: list[FusionEntry] = Field(description="N_abc; zero entries only when include_zero")
    include_zero: bool = False


# ============================================================================
# Verification
# ============================================================================


class CheckResult(BaseSchema):
    suite: str
    name: str
    passed: bool
    elapsed_seconds: float = 0.0
    detail: str = ""


class SuiteReport(BaseSchema):
    suite: str
    checks: list[CheckResult] = Field(default_factory=list)

    @computed_field
    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @computed_field
    @property
    def failures(self) -> int:
        return sum(not c.passed for c in self.checks)
