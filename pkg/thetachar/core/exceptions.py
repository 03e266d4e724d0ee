"""
Domain exceptions.

Every error raised by the engine derives from ``ThetaCharError`` and carries a
machine-readable ``code`` plus optional ``details`` so the CLI and the
verification reports can render it uniformly.
"""

from typing import Any, Dict, Optional


class ThetaCharError(Exception):
    """Base error with a stable code and structured details."""

    code = "THETACHAR_ERROR"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {"message": self.message, "code": self.code, "details": self.details}


# ============================================================================
# Series arithmetic
# ============================================================================


class TExpMismatchError(ThetaCharError):
    """Added series carry different powers of e^{2 pi i t}."""

    code = "T_EXP_MISMATCH"


class UnitMismatchError(ThetaCharError):
    """Added series differ by an odd power of i."""

    code = "UNIT_MISMATCH"


class GradingMismatchError(ThetaCharError):
    """Series truncated along different gradings were combined."""

    code = "GRADING_MISMATCH"


class NotInvertibleError(ThetaCharError):
    code = "NOT_INVERTIBLE"


class SquareRootNotSeriesError(ThetaCharError):
    code = "SQUARE_ROOT_NOT_SERIES"


# ============================================================================
# Lie theory
# ============================================================================


class UnsupportedTypeError(ThetaCharError):
    code = "UNSUPPORTED_TYPE"


class ZeroRootError(ThetaCharError):
    code = "ZERO_ROOT"


class GroupTooLargeError(ThetaCharError):
    code = "GROUP_TOO_LARGE"


class NotInDualLatticeError(ThetaCharError):
    code = "NOT_IN_DUAL_LATTICE"


class InvalidUError(ThetaCharError):
    """u violates gcd(u, h∨) = gcd(u, r∨) = 1."""

    code = "INVALID_U"


class CriticalLevelError(ThetaCharError):
    code = "CRITICAL_LEVEL"


class LevelMismatchError(ThetaCharError):
    code = "LEVEL_MISMATCH"


class NonIntegerFusionError(ThetaCharError):
    code = "NON_INTEGER_FUSION"


# ============================================================================
# Input / CLI
# ============================================================================


class InvalidInputError(ThetaCharError):
    code = "INVALID_INPUT"


class InadmissibleDescriptorError(InvalidInputError):
    """(t_beta y) does not map the simple roots of the u-scaled base to positive roots."""

    code = "INADMISSIBLE_DESCRIPTOR"


class UnknownSuiteError(ThetaCharError):
    code = "UNKNOWN_SUITE"
