"""
Core tests for the exception hierarchy.
"""

from __future__ import annotations

import pytest

from stein_lab.errors import ConfigError, PreconditionError, SizeGuardError, SteinLabError, ValidationError


@pytest.mark.unit
@pytest.mark.core
@pytest.mark.parametrize("cls", [ValidationError, SizeGuardError, PreconditionError, ConfigError])
def test_every_error_is_a_value_error(cls):
    """
    Invariant:
    callers may catch either SteinLabError or the builtin ValueError.
    """
    assert issubclass(cls, SteinLabError)
    assert issubclass(cls, ValueError)


@pytest.mark.unit
@pytest.mark.core
def test_validation_error_keeps_field_and_residual():
    err = ValidationError("not Hermitian", field="X", residual=0.25)
    assert err.field == "X"
    assert err.residual == 0.25
    assert str(err) == "not Hermitian"


@pytest.mark.unit
@pytest.mark.core
def test_size_guard_reports_request_and_limit():
    err = SizeGuardError("dense operator", requested=8192, limit=4096)
    assert (err.requested, err.limit) == (8192, 4096)
    assert "8192" in str(err) and "4096" in str(err)


@pytest.mark.unit
@pytest.mark.core
def test_config_error_prefixes_path():
    assert str(ConfigError("must be positive", path="tol")) == "tol: must be positive"
    assert str(ConfigError("bad")) == "bad"
