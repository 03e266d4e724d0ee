"""
Unit tests for settings, startup checks and domain errors.
"""

import pytest
from pydantic import ValidationError

from thetachar.core.config import Settings
from thetachar.core.exceptions import InadmissibleDescriptorError, InvalidInputError, InvalidUError
from thetachar.core.startup_checks import validate_runtime_config


# ============================================================================
# SETTINGS
# ============================================================================


class TestSettings:
    """Environment-driven configuration"""

    def test_defaults(self):
        s = Settings(_env_file=None)
        assert s.ORDER == 10
        assert s.S_MATRIX_NORMALIZATION == "calibrated"
        assert not s.is_production

    def test_env_prefix(self, monkeypatch):
        monkeypatch.setenv("THETACHAR_ORDER", "25")
        monkeypatch.setenv("THETACHAR_LOG_LEVEL", "debug")
        s = Settings(_env_file=None)
        assert s.ORDER == 25
        assert s.LOG_LEVEL == "DEBUG"

    def test_rejects_unknown_log_level(self):
        with pytest.raises(ValidationError):
            Settings(_env_file=None, LOG_LEVEL="LOUD")

    def test_rejects_unknown_normalization(self):
        with pytest.raises(ValidationError):
            Settings(_env_file=None, S_MATRIX_NORMALIZATION="printed")

    def test_order_bounds(self):
        with pytest.raises(ValidationError):
            Settings(_env_file=None, ORDER=0)


# ============================================================================
# STARTUP CHECKS
# ============================================================================


class TestStartupChecks:
    """Fail fast on inconsistent numeric settings"""

    def test_defaults_pass(self):
        validate_runtime_config(Settings(_env_file=None))

    @pytest.mark.parametrize(
        "field,value",
        [("MATRIX_TOLERANCE", 0.0), ("FUSION_TOLERANCE", 0.5), ("EXPANSION_CACHE_SIZE", 0), ("WEYL_GROUP_BOUND", 1)],
    )
    def test_bad_values(self, field, value):
        with pytest.raises(ValueError):
            validate_runtime_config(Settings(_env_file=None, **{field: value}))


# ============================================================================
# EXCEPTIONS
# ============================================================================


class TestExceptions:
    """Codes and payloads of domain errors"""

    def test_to_dict(self):
        error = InvalidUError("gcd(2, 2) = 2", details={"u": 2})
        assert error.to_dict() == {"message": "gcd(2, 2) = 2", "code": "INVALID_U", "details": {"u": 2}}

    def test_inadmissible_is_invalid_input(self):
        assert issubclass(InadmissibleDescriptorError, InvalidInputError)

    def test_details_default_to_empty(self):
        assert InvalidInputError("bad").details == {}
