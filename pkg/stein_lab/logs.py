"""
Logging setup.

Library modules only ever call logging.getLogger(__name__).
Handlers are installed exclusively by the CLI (or by a caller) through
configure_logging().
"""

from __future__ import annotations

import logging
import os

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s %(message)s"
ENV_LEVEL = "STEIN_LAB_LOG_LEVEL"


def configure_logging(level: str | int | None = None) -> logging.Logger:
    """
    Install a single stderr handler on the package logger.

    The level comes from the argument, else STEIN_LAB_LOG_LEVEL, else WARNING.
    Calling it twice replaces the previous handler.
    """
    if level is None:
        level = os.environ.get(ENV_LEVEL, "WARNING")
    if isinstance(level, str):
        level = level.upper()

    root = logging.getLogger("stein_lab")
    for handler in list(root.handlers):
        root.removeHandler(handler)

    handler = logging.StreamHandler()
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    root.addHandler(handler)
    root.setLevel(level)
    root.propagate = False
    return root
