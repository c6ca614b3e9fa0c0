"""
Core tests for logging configuration.
"""

from __future__ import annotations

import logging

import pytest

from stein_lab.logs import ENV_LEVEL, configure_logging


pytestmark = [
    pytest.mark.unit,
    pytest.mark.core,
]


@pytest.fixture(autouse=True)
def _reset_package_logger():
    yield
    logger = logging.getLogger("stein_lab")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    logger.setLevel(logging.NOTSET)
    logger.propagate = True


def test_explicit_level_wins(monkeypatch):
    monkeypatch.setenv(ENV_LEVEL, "ERROR")
    logger = configure_logging("debug")
    assert logger.level == logging.DEBUG


def test_level_from_environment(monkeypatch):
    monkeypatch.setenv(ENV_LEVEL, "INFO")
    assert configure_logging().level == logging.INFO


def test_default_level_is_warning(monkeypatch):
    monkeypatch.delenv(ENV_LEVEL, raising=False)
    assert configure_logging().level == logging.WARNING


def test_reconfiguring_replaces_the_handler():
    """
    Invariant:
    repeated configuration never stacks handlers.
    """
    configure_logging("INFO")
    logger = configure_logging("INFO")
    assert len(logger.handlers) == 1
    assert logger.propagate is False
