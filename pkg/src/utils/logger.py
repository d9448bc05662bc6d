"""Logging configuration and utilities for the TIP-GNN engine."""

import logging
import sys
from pathlib import Path
from typing import Optional

ROOT_LOGGER = "tipgnn"


def setup_logger(
    name: str = ROOT_LOGGER,
    level: int = logging.INFO,
    log_file: Optional[Path] = None,
    console: bool = True
) -> logging.Logger:
    """
    Set up and configure a logger.

    Args:
        name: Logger name
        level: Logging level (default: INFO)
        log_file: Optional file path for logging to file
        console: Whether to log to console (default: True)

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)
    logger.setLevel(level)

    # Clear existing handlers
    logger.handlers.clear()

    formatter = logging.Formatter(
        fmt='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    if console:
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(level)
        console_handler.setFormatter(formatter)
        logger.addHandler(console_handler)

    if log_file:
        add_file_handler(logger, log_file, level)

    return logger


def add_file_handler(logger: logging.Logger, log_file: Path, level: int = logging.INFO) -> logging.Handler:
    """
    Attach a UTF-8 file handler to a logger.

    Returns:
        The handler, so callers can detach it when a run finishes
    """
    log_file = Path(log_file)
    log_file.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(log_file, encoding='utf-8')
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter(
        fmt='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    ))
    logger.addHandler(handler)
    return handler


def get_logger(name: str = ROOT_LOGGER) -> logging.Logger:
    """
    Get a logger inside the `tipgnn` hierarchy.

    Args:
        name: Logger name, usually a module's __name__

    Returns:
        Logger instance
    """
    if name != ROOT_LOGGER and not name.startswith(ROOT_LOGGER + "."):
        name = f"{ROOT_LOGGER}.{name}"
    return logging.getLogger(name)


def format_record(**fields) -> str:
    """Render a one-line `key=value` record; floats get six significant digits."""
    parts = []
    for key, value in fields.items():
        if isinstance(value, float):
            value = f"{value:.6g}"
        parts.append(f"{key}={value}")
    return " ".join(parts)


# Default logger for the application
default_logger = setup_logger(
    name=ROOT_LOGGER,
    level=logging.INFO,
    console=False  # CLI turns console logging on explicitly
)
