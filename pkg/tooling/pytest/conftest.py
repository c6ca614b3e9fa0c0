"""
Global pytest configuration for stein-lab.

It provides:
- canonical marker registration
- strict marker enforcement (exactly one LEVEL and one SCOPE marker)
- explicit environment loading from .env
- restoration of the active tolerances after every test
"""

from pathlib import Path

import pytest
from dotenv import load_dotenv

from stein_lab.config import get_tolerances, load_tolerances, set_tolerances
from tooling.pytest.markers import LEVEL_MARKERS, SCOPE_MARKERS, get_all_markers


# =========================
# MARKER REGISTRATION
# =========================

def pytest_configure(config):
    """
    Register all canonical markers.
    Unknown markers are treated as errors.
    """
    for name, description in get_all_markers().items():
        config.addinivalue_line("markers", f"{name}: {description}")


# =========================
# STRICT MODE
# =========================

def pytest_collection_modifyitems(config, items):
    """
    Enforce that every test has exactly:
    - one LEVEL marker
    - one SCOPE marker
    """
    level_markers = set(LEVEL_MARKERS)
    scope_markers = set(SCOPE_MARKERS)

    for item in items:
        item_markers = {m.name for m in item.iter_markers()}

        levels = item_markers & level_markers
        if len(levels) != 1:
            pytest.fail(
                f"Test '{item.nodeid}' needs exactly one LEVEL marker "
                f"(one of {sorted(level_markers)}), has {sorted(levels)}",
                pytrace=False,
            )

        scopes = item_markers & scope_markers
        if len(scopes) != 1:
            pytest.fail(
                f"Test '{item.nodeid}' needs exactly one SCOPE marker "
                f"(one of {sorted(scope_markers)}), has {sorted(scopes)}",
                pytrace=False,
            )


# =========================
# ENVIRONMENT LOADING
# =========================

def pytest_sessionstart(session):
    """
    Load .env explicitly, then build the session tolerances from it.

    Tests never rely on whatever tolerances an earlier import cached.
    """
    env_file = Path(".env")
    if env_file.exists():
        load_dotenv(env_file, override=False)
    set_tolerances(load_tolerances(env_file=env_file))


# =========================
# ISOLATION
# =========================

@pytest.fixture(autouse=True)
def _restore_tolerances():
    saved = get_tolerances()
    yield
    set_tolerances(saved)
