"""
Startup validation.
Validates runtime configuration before any computation runs.
"""

import structlog

from thetachar.core.config import Settings, settings

logger = structlog.get_logger(__name__)


def validate_runtime_config(config: Settings = settings) -> None:
    """
    Validate numeric configuration. Fails fast if misconfigured.

    Raises:
        ValueError: if any setting is out of range
    """
    errors = []

    if config.MATRIX_TOLERANCE <= 0:
        errors.append("MATRIX_TOLERANCE must be positive")

    # fusion coefficients are rounded to the nearest integer
    if not 0 < config.FUSION_TOLERANCE < 0.5:
        errors.append("FUSION_TOLERANCE must lie in (0, 0.5)")

    if config.EXPANSION_CACHE_SIZE < 1:
        errors.append("EXPANSION_CACHE_SIZE must be at least 1")

    if config.WEYL_GROUP_BOUND < 2:
        errors.append("WEYL_GROUP_BOUND must allow at least the rank-one Weyl group")

    if errors:
        logger.error("❌ Runtime configuration validation failed", errors=errors)
        raise ValueError(f"Invalid runtime configuration: {len(errors)} error(s) found")

    logger.debug("✅ Runtime configuration validation passed", order=config.ORDER)
