"""Centralized logging configuration for hrs-lab.

Reports go to stdout, so log lines go to stderr. The root level starts at
INFO and follows ``HRS_LAB_LOG_LEVEL`` once ``Config.load`` has run.
"""

import logging
import sys

LOG_FORMAT = '%(asctime)s %(levelname)-8s %(name)s: %(message)s'
DATE_FORMAT = '%H:%M:%S'

formatter = logging.Formatter(LOG_FORMAT, DATE_FORMAT)
handler = logging.StreamHandler(sys.stderr)
handler.setFormatter(formatter)

# Configure logging
logging.basicConfig(level=logging.INFO, handlers=[handler])


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance with the given name.

    Usage in modules:
        from logger_config import get_logger
        logger = get_logger(__name__)
    """
    return logging.getLogger(name)


def set_level(level: str | int) -> int:
    """Change the root level, e.g. from ``HRS_LAB_LOG_LEVEL``; returns the numeric level."""
    if isinstance(level, str):
        level = logging.getLevelName(level.strip().upper())
        if not isinstance(level, int):
            raise ValueError(f"unknown log level {level!r}")
    logging.getLogger().setLevel(level)
    return level
