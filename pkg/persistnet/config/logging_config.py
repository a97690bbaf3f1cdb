import logging
import logging.config
import sys
from pathlib import Path
from typing import Any, Dict, Optional

from tqdm import tqdm

from ..errors import ParameterError

LOG_LEVELS = {
    "debug": logging.DEBUG,
    "info": logging.INFO,
    "warning": logging.WARNING,
    "error": logging.ERROR,
    "critical": logging.CRITICAL,
}

DEFAULT_FORMAT = "%(asctime)s [%(levelname)s][%(name)s]: %(message)s (%(filename)s:%(lineno)d)"
LOG_FILE_MAX_BYTES = 10 * 1024 * 1024
LOG_FILE_BACKUPS = 5


class TqdmHandler(logging.StreamHandler):
    """Writes records to stderr through ``tqdm.write`` so active progress bars stay intact."""

    def __init__(self) -> None:
        super().__init__(stream=sys.stderr)

    def emit(self, record: logging.LogRecord) -> None:
        try:
            tqdm.write(self.format(record), file=self.stream)
        except Exception:
            self.handleError(record)


def parse_level(name: Any) -> int:
    try:
        return LOG_LEVELS[str(name).lower()]
    except KeyError:
        raise ParameterError(
            f"Unknown log level '{name}', expected one of {', '.join(LOG_LEVELS)}"
        ) from None


class LoggingConfig:
    """Logging for persistnet runs.

    The ``persistnet`` logger does not propagate. Its console handler writes to stderr because
    stdout carries records and CSV output. ``warnings`` raised by numpy and scipy (overflow in a
    generating function, a degenerate Beta fit) are routed into the same handlers.
    """

    def __init__(self, config: Optional[Dict[str, Any]] = None):
        self.config = config or {}
        self.level = parse_level(self.config.get("log_level", "warning"))
        self.log_format = self.config.get("log_format", DEFAULT_FORMAT)
        self.log_file = self.config.get("log_file")
        logging.config.dictConfig(self.build())
        logging.captureWarnings(True)

    def build(self) -> Dict[str, Any]:
        """The ``dictConfig`` mapping for this configuration."""
        handlers: Dict[str, Dict[str, Any]] = {
            "console": {
                "()": TqdmHandler,
                "level": self.level,
                "formatter": "standard",
            },
        }
        if self.log_file:
            Path(self.log_file).parent.mkdir(parents=True, exist_ok=True)
            handlers["file"] = {
                "class": "logging.handlers.RotatingFileHandler",
                "level": self.level,
                "formatter": "standard",
                "filename": str(self.log_file),
                "maxBytes": LOG_FILE_MAX_BYTES,
                "backupCount": LOG_FILE_BACKUPS,
                "encoding": "utf-8",
            }
        names = list(handlers)
        return {
            "version": 1,
            "disable_existing_loggers": False,
            "formatters": {"standard": {"format": self.log_format, "datefmt": "%Y-%m-%d %H:%M:%S"}},
            "handlers": handlers,
            "loggers": {
                "persistnet": {"level": self.level, "handlers": names, "propagate": False},
                "py.warnings": {"level": logging.WARNING, "handlers": names, "propagate": False},
            },
        }


def get_logger(name: str) -> logging.Logger:
    """Logger below the ``persistnet`` namespace, e.g. ``get_logger("network.temporal")``."""
    if not name.startswith("persistnet."):
        name = f"persistnet.{name}"
    return logging.getLogger(name)
