"""
mpsched - Logging Configuration
Structured logging with run context binding and JSON or console output
"""

import logging
import sys
from typing import ContextManager, Optional

import structlog
from pythonjsonlogger import jsonlogger

from mpsched.core.config import settings

_SHARED_PROCESSORS = [
    structlog.contextvars.merge_contextvars,
    structlog.stdlib.add_logger_name,
    structlog.stdlib.add_log_level,
    structlog.stdlib.PositionalArgumentsFormatter(),
    structlog.processors.TimeStamper(fmt="iso"),
    structlog.processors.StackInfoRenderer(),
    structlog.processors.format_exc_info,
    structlog.processors.UnicodeDecoder(),
]


def setup_logging(level: Optional[str] = None, fmt: Optional[str] = None) -> None:
    """
    Configure structured logging for the application.

    Sets up:
    - JSON formatting (python-json-logger) or a console renderer
    - A single stderr handler; stdout is reserved for result tables
    - Run context (scenario, scheduler, seed) merged from contextvars
    """
    level = (level or settings.LOG_LEVEL).upper()
    fmt = (fmt or settings.LOG_FORMAT).lower()
    log_level = getattr(logging, level, logging.INFO)

    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(log_level)

    if fmt == "json":
        handler.setFormatter(
            jsonlogger.JsonFormatter(
                fmt="%(timestamp)s %(level)s %(name)s %(message)s",
                rename_fields={"message": "event"},
            )
        )
        final_processor = structlog.stdlib.render_to_log_kwargs
    else:
        handler.setFormatter(
            structlog.stdlib.ProcessorFormatter(
                processor=structlog.dev.ConsoleRenderer(colors=False),
            )
        )
        final_processor = structlog.stdlib.ProcessorFormatter.wrap_for_formatter

    root_logger = logging.getLogger()
    for existing in list(root_logger.handlers):
        root_logger.removeHandler(existing)
    root_logger.addHandler(handler)
    root_logger.setLevel(log_level)

    structlog.configure(
        processors=[structlog.stdlib.filter_by_level, *_SHARED_PROCESSORS, final_processor],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """
    Get a configured logger instance.

    Args:
        name: Logger name (usually __name__)

    Returns:
        Structlog logger bound to the stdlib logger of that name
    """
    return structlog.stdlib.get_logger(name)


def run_context(**context) -> ContextManager[None]:
    """Attach run identifiers to log lines emitted inside the block; restored on exit."""
    return structlog.contextvars.bound_contextvars(**context)


__all__ = ["setup_logging", "get_logger", "run_context"]
