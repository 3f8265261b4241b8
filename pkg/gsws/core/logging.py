"""
Structured logging configuration
"""
import json
import logging
import sys
from datetime import datetime, timezone
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Optional

from gsws.core.config import settings

# Attributes every LogRecord carries; anything else came in through ``extra=``.
_RESERVED_ATTRS = frozenset(
    vars(logging.LogRecord("", 0, "", 0, "", (), None)).keys()
) | {"message", "asctime"}


class JSONFormatter(logging.Formatter):
    """JSON formatter for structured logging"""

    def format(self, record: logging.LogRecord) -> str:
        log_data = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        for key, value in vars(record).items():
            if key not in _RESERVED_ATTRS and not key.startswith("_"):
                log_data[key] = value

        return json.dumps(log_data, default=str)


def setup_logging(
    level: Optional[str] = None,
    json_format: Optional[bool] = None,
    log_file: Optional[str] = None,
) -> logging.Logger:
    """
    Configure the root logger.

    Records go to stderr so that result tables written to stdout stay
    machine-readable.

    Args:
        level: Log level name, defaults to settings.LOG_LEVEL (DEBUG when settings.DEBUG)
        json_format: Emit JSON lines, defaults to settings.LOG_JSON
        log_file: Optional rotating log file, defaults to settings.LOG_FILE
    """
    if level is None:
        level = "DEBUG" if settings.DEBUG else settings.LOG_LEVEL
    if json_format is None:
        json_format = settings.LOG_JSON and not settings.DEBUG
    if log_file is None:
        log_file = settings.LOG_FILE

    root_logger = logging.getLogger()
    root_logger.setLevel(level)
    root_logger.handlers = []

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(level)
    if json_format:
        console_formatter: logging.Formatter = JSONFormatter()
    else:
        console_formatter = logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
        )
    console_handler.setFormatter(console_formatter)
    root_logger.addHandler(console_handler)

    if log_file:
        path = Path(log_file)
        path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = RotatingFileHandler(
            path,
            maxBytes=10 * 1024 * 1024,  # 10MB
            backupCount=5,
        )
        file_handler.setLevel(level)
        file_handler.setFormatter(JSONFormatter())
        root_logger.addHandler(file_handler)

    return root_logger


def get_logger(name: str) -> logging.Logger:
    """Get a logger instance"""
    return logging.getLogger(name)


class StructuredLogger:
    """Structured logger for solver events"""

    def __init__(self, logger: logging.Logger):
        self.logger = logger

    def log_event(self, event_type: str, **kwargs):
        """Log a structured event"""
        self.logger.info(
            f"Event: {event_type}",
            extra={"event_type": event_type, **kwargs}
        )

    def log_warning(self, event_type: str, **kwargs):
        """Log a structured warning"""
        self.logger.warning(
            f"Warning: {event_type}",
            extra={"event_type": event_type, **kwargs}
        )

    def log_error(self, error_type: str, error: Exception, **kwargs):
        """Log a structured error"""
        self.logger.error(
            f"Error: {error_type} - {str(error)}",
            extra={"error_type": error_type, "error": str(error), **kwargs},
            exc_info=True
        )

    def log_performance(self, operation: str, duration: float, **kwargs):
        """Log performance metrics"""
        self.logger.info(
            f"Performance: {operation}",
            extra={"operation": operation, "duration_ms": duration * 1000, **kwargs}
        )
