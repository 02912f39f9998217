"""
Logging setup for the command-line interface
"""

import logging

from rich.logging import RichHandler

from .console import console

LOGGER_NAME = "thyroidiomics"


def setup_logging(verbosity: int = 0) -> logging.Logger:
    """
    Route the package logger through rich

    Args:
        verbosity: ``-1`` warnings only, ``0`` info, ``>=1`` debug

    Returns:
        The configured package logger
    """
    if verbosity < 0:
        level = logging.WARNING
    elif verbosity == 0:
        level = logging.INFO
    else:
        level = logging.DEBUG

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level)
    if not any(isinstance(h, RichHandler) for h in logger.handlers):
        handler = RichHandler(console=console, show_path=False, markup=False)
        handler.setFormatter(logging.Formatter("%(message)s"))
        logger.addHandler(handler)
    for handler in logger.handlers:
        handler.setLevel(level)
    logger.propagate = False
    return logger
