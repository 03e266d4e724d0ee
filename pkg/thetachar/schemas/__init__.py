"""Pydantic records for command output."""

from thetachar.schemas.common import BaseSchema, ErrorRecord, ErrorResponse, RationalRecord
from thetachar.schemas.output import (
    CheckResult,
    DescriptorRecord,
    FusionEntry,
    FusionTable,
    OutputRecord,
    RecordMeta,
    SuiteReport,
    TermRecord,
)

__all__ = [
    # Common
    "BaseSchema",
    "ErrorRecord",
    "ErrorResponse",
    "RationalRecord",
    # Series
    "TermRecord",
    "DescriptorRecord",
    "RecordMeta",
    "OutputRecord",
    # Fusion
    "FusionEntry",
    "FusionTable",
    # Verification
    "CheckResult",
    "SuiteReport",
]
