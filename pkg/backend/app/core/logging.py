"""
Logging setup shared by the services and the command-line front end.
"""

import logging
import sys
from typing import Optional

from app.core.settings import settings

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

_ROOT = "app"


def configure_logging(level: Optional[str] = None) -> logging.Logger:
    """
    Attach a single stderr handler to the package logger, replacing any
    handler from an earlier call so the current sys.stderr is used.

    Args:
        level: Level name; falls back to settings.LOG_LEVEL

    Returns:
        The configured package logger
    """
    logger = logging.getLogger(_ROOT)
    logger.setLevel((level or settings.LOG_LEVEL).upper())
    for old in list(logger.handlers):
        logger.removeHandler(old)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logger.addHandler(handler)
    return logger


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)
