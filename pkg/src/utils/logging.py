"""Logging setup for the lab's entry points.

Library modules log through ``logging.getLogger(__name__)``; entry points
call :func:`setup_logger`, which installs a loguru sink on stderr and routes
standard-library records into it.
"""

from pathlib import Path
from typing import Optional, Union
import logging
import sys

from loguru import logger


class InterceptHandler(logging.Handler):
    """Forward standard-library log records to loguru."""

    def emit(self, record: logging.LogRecord) -> None:
        try:
            level: Union[str, int] = logger.level(record.levelname).name
        except ValueError:
            level = record.levelno

        # Walk back past the logging module so loguru reports the caller
        frame, depth = logging.currentframe(), 2
        while frame is not None and frame.f_code.co_filename == logging.__file__:
            frame = frame.f_back
            depth += 1

        logger.opt(depth=depth, exception=record.exc_info).log(level, record.getMessage())


def setup_logger(level: str = "INFO", log_file: Optional[Union[str, Path]] = None) -> None:
    """Configure loguru sinks and intercept standard logging.

    Args:
        level: Minimum level for the stderr sink
        log_file: Optional file receiving DEBUG and above
    """
    logger.remove()
    logger.add(
        sys.stderr,
        level=level,
        format="<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | <level>{message}</level>",
    )

    if log_file:
        logger.add(
            str(log_file),
            level="DEBUG",
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{line} | {message}",
        )

    logging.basicConfig(handlers=[InterceptHandler()], level=0, force=True)
