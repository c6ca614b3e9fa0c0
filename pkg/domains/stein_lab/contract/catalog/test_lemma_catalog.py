"""
Contract tests for the lemma catalog and the experiment registry.
"""

from __future__ import annotations

import pytest

from stein_lab.harness import list_experiments, load_manifest, uncovered_lemmas
from stein_lab.harness.cli import build_parser


pytestmark = [
    pytest.mark.contract,
    pytest.mark.domain,
]


def test_every_catalog_lemma_has_an_experiment():
    """
    Invariant:
    no lemma in the catalog is left without an experiment that checks it.
    """
    assert uncovered_lemmas() == []


def test_experiments_only_claim_catalog_lemmas():
    manifest = load_manifest()
    for spec in list_experiments():
        assert set(spec.lemmas) <= set(manifest), spec.id


def test_experiment_ids_are_unique_cli_verbs():
    ids = [spec.id for spec in list_experiments()]
    assert len(ids) == len(set(ids))
    parser = build_parser()
    for experiment in ids:
        assert parser.parse_args([experiment]).command == experiment


def test_experiment_dicts_are_serialisable():
    for spec in list_experiments():
        data = spec.to_dict()
        assert set(data) == {"id", "summary", "defaults", "inputs", "lemmas"}
        assert set(spec.validators) == set(spec.defaults)
