"""
Common schemas shared by the output records.
"""

from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


def to_camel_case(string: str) -> str:
    """
    Convert snake_case to camelCase for serialization.

    Examples:
        q_num → qNum
        weight_coords → weightCoords
        unit_power → unitPower
    """
    components = string.split("_")
    return components[0] + "".join(x.title() for x in components[1:])


class BaseSchema(BaseModel):
    """
    Base schema with automatic camelCase serialization.

    Accepts both snake_case and camelCase on input (populate_by_name=True),
    always dumps camelCase.
    """

    model_config = ConfigDict(
        alias_generator=to_camel_case,
        populate_by_name=True,
        from_attributes=True,
        ser_json_by_alias=True,
    )


class RationalRecord(BaseSchema):
    """An exact rational as separate numerator and denominator integers."""

    num: int
    den: int = Field(default=1, gt=0)

    @classmethod
    def of(cls, value) -> "RationalRecord":
        value = Fraction(value)
        return cls(num=value.numerator, den=value.denominator)

    def to_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)


class ErrorRecord(BaseModel):
    """
    Error payload printed by the CLI in JSON mode:

    {"error": {"message": ..., "code": ..., "details": {}}, "timestamp": ...}
    """

    message: str = Field(..., description="Human-readable error message")
    code: str = Field(..., description="Machine-readable error code")
    details: Optional[dict[str, Any]] = Field(default=None, description="Additional error details")

    @field_validator("details", mode="before")
    @classmethod
    def stringify_details(cls, v):
        if v is None:
            return v
        return {key: value if isinstance(value, (int, float, bool, list)) else str(value) for key, value in v.items()}


class ErrorResponse(BaseModel):
    """Wrapper for error records with timestamp."""

    error: ErrorRecord
    timestamp: datetime = Field(default_factory=lambda: datetime.now(timezone.utc))
