"""
Canonical pytest markers for the stein-lab test tree.

This file defines the only allowed semantic markers.
Any test using undeclared or ambiguous markers is invalid.

Markers encode TEST INTENT, not implementation detail.
"""

# =========================
# LEVEL MARKERS
# =========================

LEVEL_MARKERS = {
    "unit": "Unit-level tests (one function or type, no IO)",
    "integration": "Integration tests across modules of the library",
    "contract": "Contract tests (report schema, catalog, config format, CLI surface)",
    "e2e": "End-to-end tests through the CLI entry point, writing real files",
    "scenario": "Scenario tests reproducing a complete experiment workflow",
}

# =========================
# SCOPE MARKERS
# =========================

SCOPE_MARKERS = {
    "domain": "Domain-scoped tests (one stein_lab subpackage)",
    "aggregate": "Aggregate-scoped tests (several subpackages cooperating)",
    "core": "Shared foundations: errors, config, verdicts, logging",
    "product": "Product-level tests (the stein-lab command line)",
}

# =========================
# EXECUTION MARKERS
# =========================

EXECUTION_MARKERS = {
    "slow": "Slow tests (explicitly opt-in with -m slow)",
    "exhaustive": "Exhaustive grids over n and alphabet size",
}

# =========================
# ALL MARKERS (FLATTENED)
# =========================

ALL_MARKERS = {
    **LEVEL_MARKERS,
    **SCOPE_MARKERS,
    **EXECUTION_MARKERS,
}


def get_all_markers():
    """
    Returns all canonical stein-lab pytest markers.

    Used by conftest.py to register markers and enforce strictness.
    """
    return ALL_MARKERS
