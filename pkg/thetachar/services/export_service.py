"""
Export service: series and fusion tensors to JSON, CSV and rich tables.
"""

import csv
import io
from fractions import Fraction
from typing import Optional

import numpy as np
import structlog
from rich.table import Table

from thetachar.engine.affine_weights import AdmissibleDescriptor
from thetachar.engine.modular_fusion import fusion_tensor, s_matrix
from thetachar.engine.root_system import RootSystem
from thetachar.engine.series import GradedSeries
from thetachar.schemas.output import (
    DescriptorRecord,
    FusionEntry,
    FusionTable,
    OutputRecord,
    RecordMeta,
)

logger = structlog.get_logger(__name__)


def _fraction_text(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


class ExportService:
    """Conversions from engine results to serializable records."""

    @staticmethod
    def series_record(
        series: GradedSeries,
        algebra: str,
        descriptor: Optional[AdmissibleDescriptor] = None,
        order: Optional[int] = None,
    ) -> OutputRecord:
        meta = RecordMeta(
            algebra=algebra,
            u=descriptor.u if descriptor else None,
            descriptor=DescriptorRecord.from_descriptor(descriptor) if descriptor else None,
            order=order,
        )
        return OutputRecord.from_series(series, meta)

    @staticmethod
    def to_json(record) -> str:
        """camelCase JSON; term order is fixed by the record."""
        return record.model_dump_json(by_alias=True, indent=2)

    @staticmethod
    def series_table(record: OutputRecord, title: Optional[str] = None) -> Table:
        table = Table(title=title or record.meta.algebra)
        table.add_column("q", justify="right")
        table.add_column("weight", justify="left")
        table.add_column("coefficient", justify="right")
        for term in record.terms:
            q = Fraction(term.q_num, term.q_den)
            weight = ", ".join(_fraction_text(w.to_fraction()) for w in term.weight_coords)
            coeff = Fraction(term.coeff_num, term.coeff_den)
            table.add_row(_fraction_text(q), f"({weight})", _fraction_text(coeff))
        if record.unit_power:
            table.caption = "overall factor i"
        return table

    # ------------------------------------------------------------------
    # Fusion
    # ------------------------------------------------------------------

    @staticmethod
    def fusion_table(
        rs: RootSystem, u: int, normalization: Optional[str] = None, include_zero: bool = False
    ) -> FusionTable:
        """Fusion tensor as records; zero coefficients only when ``include_zero``."""
        weights = s_matrix(rs, u, normalization).weights
        tensor = fusion_tensor(rs, u, normalization)
        indices = np.ndindex(tensor.shape) if include_zero else zip(*np.nonzero(tensor))
        entries = [
            FusionEntry(a=int(a), b=int(b), c=int(c), value=int(tensor[a, b, c]))
            for a, b, c in indices
        ]
        logger.info(
            "Built fusion table",
            cartan=str(rs.cartan_type),
            u=u,
            entries=len(entries),
            include_zero=include_zero,
        )
        return FusionTable(
            algebra=rs.cartan_type.label,
            u=u,
            weights=[DescriptorRecord.from_descriptor(d) for d in weights],
            entries=entries,
            include_zero=include_zero,
        )

    @staticmethod
    def fusion_csv(table: FusionTable) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["a", "b", "c", "labelA", "labelB", "labelC", "value"])
        for e in table.entries:
            writer.writerow(
                [e.a, e.b, e.c, table.weights[e.a].label, table.weights[e.b].label,
                 table.weights[e.c].label, e.value]
            )
        return buffer.getvalue()
