"""
Logging Configuration

Console logging for the command-line toolkit. Log records go to stderr so
that stdout stays free for the rich summaries printed by the CLI.
"""

import sys
from logging.config import dictConfig

from treecodec.core.config import settings


def setup_logging(level: str | None = None) -> None:
    """
    Initialize toolkit logging with consistent formatting.

    Configuration:
        - Output: stderr
        - Format: Timestamp | Level | Module | Message
        - Level: ``level`` argument, else the LOG_LEVEL setting

    Note:
        Call once per process (the CLI does it before dispatching).
    """
    log_level = (level or settings.LOG_LEVEL).upper()

    log_format = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"
    date_format = "%Y-%m-%d %H:%M:%S"

    logging_config = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "default": {
                "format": log_format,
                "datefmt": date_format,
            },
        },
        "handlers": {
            "console": {
                "class": "logging.StreamHandler",
                "stream": sys.stderr,
                "formatter": "default",
            },
        },
        "root": {
            "level": "WARNING",
            "handlers": ["console"],
        },
        "loggers": {
            "treecodec": {
                "level": log_level,
                "handlers": ["console"],
                "propagate": False,  # Prevent duplicate logs to root
            },
        },
    }

    dictConfig(logging_config)
