"""
Structured logging for the synthesis toolkit.

JSON records go to a daily-rotated file under the log directory and,
optionally, to stderr so that stdout stays free for reports. Values bound
with bind_run_context (the CLI binds the command name) are merged into
every record of the run.
"""

import logging
import os
import sys
from logging.handlers import TimedRotatingFileHandler
from pathlib import Path
from typing import Any, Dict, List, Optional

import structlog

LOG_FILE_NAME = 'ghzsynth.log'
LOG_BACKUPS = 3

# Attributes our exceptions carry besides the message
ERROR_FIELDS = ('line_number', 'source', 'branch', 'measured', 'allowed')


def _processors(json_format: bool) -> List[Any]:
    renderer = structlog.processors.JSONRenderer() if json_format else structlog.dev.ConsoleRenderer()
    return [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.filter_by_level,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.stdlib.PositionalArgumentsFormatter(),
        structlog.processors.TimeStamper(fmt='ISO'),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
        structlog.processors.UnicodeDecoder(),
        renderer,
    ]


def setup_logging(
    level: str = 'INFO',
    log_dir: Optional[Path] = None,
    json_format: bool = True,
    console_output: bool = True,
) -> None:
    """Route structlog through stdlib handlers: rotating file plus optional stderr."""
    log_dir = Path(log_dir) if log_dir else Path('logs')
    log_dir.mkdir(parents=True, exist_ok=True)

    structlog.configure(
        processors=_processors(json_format),
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    file_handler = TimedRotatingFileHandler(
        log_dir / LOG_FILE_NAME,
        when='midnight',
        backupCount=LOG_BACKUPS,
        encoding='utf-8',
    )
    file_handler.suffix = '%Y-%m-%d'
    handlers: List[logging.Handler] = [file_handler]
    if console_output:
        handlers.append(logging.StreamHandler(sys.stderr))

    logging.basicConfig(
        format='%(message)s',
        level=getattr(logging, level.upper()),
        handlers=handlers,
        force=True,
    )


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    return structlog.get_logger(name)


def bind_run_context(**values: Any) -> None:
    """Replace the values merged into every record of this run."""
    structlog.contextvars.clear_contextvars()
    structlog.contextvars.bind_contextvars(**{k: v for k, v in values.items() if v is not None})


def error_context(error: Exception) -> Dict[str, Any]:
    """Type, message and whichever location or depth fields the error carries."""
    fields: Dict[str, Any] = {
        'error_type': type(error).__name__,
        'error_message': str(error),
    }
    for name in ERROR_FIELDS:
        value = getattr(error, name, None)
        if value is not None:
            fields[name] = value
    return fields


class LoggerMixin:
    """Adds a class-named logger and the operation/error event helpers."""

    @property
    def logger(self) -> structlog.stdlib.BoundLogger:
        return get_logger(self.__class__.__name__)

    def log_operation(self, operation: str, **kwargs: Any) -> None:
        """One `operation` record per synthesizer or service call."""
        self.logger.info(
            'operation',
            operation=operation,
            class_name=self.__class__.__name__,
            **kwargs,
        )

    def log_error(self, error: Exception, operation: Optional[str] = None, **kwargs: Any) -> None:
        self.logger.error(
            'error_occurred',
            operation=operation,
            class_name=self.__class__.__name__,
            **error_context(error),
            **kwargs,
        )


def configure_logging_from_env_and_config(
    config_manager=None,
    log_level_override: Optional[str] = None,
    log_dir_override: Optional[str] = None,
    console_output: bool = False,
) -> None:
    """Configure logging from CLI overrides, LOG_* variables and the config file.

    Priority is override, then environment, then config file, then default.
    LOG_FORMAT=console switches the JSON renderer for a readable one.
    """
    log_level = (
        log_level_override
        or os.getenv('LOG_LEVEL')
        or (config_manager.config.log_level if config_manager else None)
        or 'INFO'
    )
    log_dir = log_dir_override or os.getenv('LOG_DIR') or 'logs'
    json_format = os.getenv('LOG_FORMAT', 'json').lower() != 'console'

    setup_logging(
        level=log_level,
        log_dir=Path(log_dir),
        json_format=json_format,
        console_output=console_output,
    )


# Minimal logging until the CLI reconfigures it
setup_logging(level='WARNING', console_output=False)
