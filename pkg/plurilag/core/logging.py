"""Logging configuration."""

import logging
import sys
from pathlib import Path
from typing import Optional

from loguru import logger

from plurilag.config import settings


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None):
    """Setup application logging.

    Console output goes to stderr so that report output on stdout stays byte-stable.
    """
    level = (level or settings.log_level).upper()
    log_file = log_file or settings.log_file

    # Remove default handler
    logger.remove()

    # Add console handler
    logger.add(
        sink=sys.stderr,
        format="<green>{time:YYYY-MM-DD HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>",
        level=level,
        colorize=True,
    )

    # Add file handler
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        logger.add(
            sink=log_file,
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}",
            level=level,
            rotation=settings.log_rotation,
            retention=settings.log_retention,
            compression="zip",
        )

    # Configure standard library logging
    logging.basicConfig(
        level=getattr(logging, level, logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )

    logger.debug(f"Logging configured - Level: {level}")


def get_logger(name: str):
    """Get a logger instance."""
    return logger.bind(name=name)
