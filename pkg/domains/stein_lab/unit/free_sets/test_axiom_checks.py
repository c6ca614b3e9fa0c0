"""
Unit tests for the free-family axiom validators and the hull membership
distance they rely on.
"""

from __future__ import annotations

import numpy as np
import pytest

from stein_lab.errors import ValidationError
from stein_lab.free_sets import (
    BROKEN_AXIOMS,
    build_broken_family,
    build_product_family,
    build_sep_family,
    check_axioms,
    hull_distance,
    project_to_simplex,
)


pytestmark = [
    pytest.mark.unit,
    pytest.mark.domain,
]


# ============================================================
# MEMBERSHIP
# ============================================================

def test_simplex_projection():
    w = project_to_simplex(np.array([0.8, 0.6, -0.2]))
    assert w.sum() == pytest.approx(1.0)
    assert np.all(w >= 0.0)
    assert w == pytest.approx([0.6, 0.4, 0.0])


def test_midpoint_is_in_hull():
    a, b = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    result = hull_distance(np.eye(2) / 2, [a, b])
    assert result.distance < 1e-6
    assert result.weights == pytest.approx([0.5, 0.5], abs=1e-4)


def test_outside_point_distance():
    target = np.full((2, 2), 0.5)
    result = hull_distance(target, [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
    # off-diagonal entries are out of reach
    assert result.distance == pytest.approx(np.sqrt(0.5), abs=1e-6)


def test_hull_distance_requires_generators():
    with pytest.raises(ValidationError):
        hull_distance(np.eye(2) / 2, [])


# ============================================================
# AXIOMS
# ============================================================

def test_product_family_passes_every_axiom():
    """
    Invariant:
    product-of-generators families are closed under partial traces,
    tensor products and permutations.
    """
    zero, one, plus = np.diag([1.0, 0.0]), np.diag([0.0, 1.0]), np.full((2, 2), 0.5)
    report = check_axioms(build_product_family([zero, one, plus], max_level=3))
    assert report.all_passed
    assert report.failed() == []
    assert report.c > 0.0
    assert report.rule == "product-of-generators"


def test_single_level_sep_family_skips_level_axioms():
    report = check_axioms(build_sep_family(2, 2, 16, seed=1))
    checks = report.by_axiom()
    assert checks["A2"].passed is True
    assert checks["A3"].skipped
    assert checks["A4"].skipped
    assert report.inner_approximation


@pytest.mark.parametrize("axiom", BROKEN_AXIOMS)
def test_broken_family_fails_only_its_axiom(axiom):
    report = check_axioms(build_broken_family(axiom))
    assert report.failed() == [axiom]
    assert report.by_axiom()[axiom].residual >= 0.49


def test_unknown_broken_axiom():
    with pytest.raises(ValidationError):
        build_broken_family("A1")


def test_report_serializes():
    data = check_axioms(build_broken_family("A4")).to_dict()
    assert [c["axiom"] for c in data["checks"]] == ["A1", "A2", "A3", "A4", "A5"]
    assert data["checks"][3]["passed"] is False
