"""
Structured logging configuration.

Engine modules log through ``structlog.get_logger(__name__)``. Everything is
written to stderr so that JSON printed by the CLI on stdout stays parseable.
"""

import logging
import os
import sys

import structlog

from thetachar.core.config import settings

_configured = False


def configure_logging(force: bool = False) -> None:
    """
    Configure structlog and the standard library root logger once.

    Production uses JSON lines for log aggregation; everything else gets the
    colored console renderer.
    """
    global _configured
    if _configured and not force:
        return

    processors = [
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.processors.TimeStamper(fmt="iso"),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
    ]
    if settings.is_production:
        processors.append(structlog.processors.JSONRenderer())
    else:
        processors.append(structlog.dev.ConsoleRenderer(colors=False))

    structlog.configure(
        processors=processors,
        wrapper_class=structlog.stdlib.BoundLogger,
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.LOG_FILE:
        log_dir = os.path.dirname(settings.LOG_FILE)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        handlers.append(logging.FileHandler(settings.LOG_FILE))

    logging.basicConfig(
        level=settings.LOG_LEVEL,
        format="%(message)s",
        handlers=handlers,
        force=True,
    )
    _configured = True
