"""
Numeric tolerances and size guards.

One frozen Tolerances value is active per process. It is built from
defaults, then a .env file (python-dotenv), then the process environment;
every variable is prefixed STEIN_LAB_ and listed in .env.example.

Experiment parameters never come from the environment: only tolerances,
guards and logging do.
"""

from __future__ import annotations

import os
import threading
from contextlib import contextmanager
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Any, Iterator, Mapping

from dotenv import dotenv_values

from stein_lab.errors import ConfigError

ENV_PREFIX = "STEIN_LAB_"


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-12
    spectral: float = 1e-10
    normalization: float = 1e-9
    support: float = 1e-12
    support_mass: float = 1e-10
    witness: float = 1e-8
    certificate: float = 1e-8
    fw_gap: float = 1e-6
    fw_max_iter: int = 10_000
    bisection: float = 1e-9
    sdp: float = 1e-9
    enumeration_guard: int = 10_000_000
    dense_guard: int = 4096
    symmetrize_guard: int = 20_000_000
    membership: float = 0.05
    quad_nodes: int = 32

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def env_names(cls) -> dict[str, str]:
        """Map of field name to environment variable name."""
        return {f.name: f"{ENV_PREFIX}{f.name.upper()}" for f in fields(cls)}


def _coerce(name: str, raw: str, kind: type) -> Any:
    try:
        value = int(float(raw)) if kind is int else float(raw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"cannot parse {raw!r} as {kind.__name__}", path=name) from exc
    if value <= 0:
        raise ConfigError("must be positive", path=name)
    return value


def load_tolerances(
    env_file: str | os.PathLike[str] | None = None,
    environ: Mapping[str, str] | None = None,
) -> Tolerances:
    """
    Build a Tolerances value.

    Precedence: environment > env_file > defaults.
    """
    source: dict[str, str] = {}
    if env_file is not None and Path(env_file).exists():
        source.update({k: v for k, v in dotenv_values(env_file).items() if v is not None})
    source.update(os.environ if environ is None else environ)

    changes: dict[str, Any] = {}
    kinds = {f.name: f.type for f in fields(Tolerances)}
    for field_name, var in Tolerances.env_names().items():
        if var in source:
            kind = int if kinds[field_name] in ("int", int) else float
            changes[field_name] = _coerce(var, source[var], kind)
    return replace(Tolerances(), **changes)


_lock = threading.Lock()
_active: Tolerances | None = None


def get_tolerances() -> Tolerances:
    global _active
    if _active is None:
        with _lock:
            if _active is None:
                _active = load_tolerances(env_file=".env")
    return _active


def set_tolerances(tolerances: Tolerances) -> None:
    global _active
    with _lock:
        _active = tolerances


@contextmanager
def tolerance_override(**changes: Any) -> Iterator[Tolerances]:
    """Temporarily replace some tolerances; restores the previous set on exit."""
    previous = get_tolerances()
    unknown = set(changes) - {f.name for f in fields(Tolerances)}
    if unknown:
        raise ConfigError(f"unknown tolerance(s) {sorted(unknown)}", path="tolerances")
    set_tolerances(replace(previous, **changes))
    try:
        yield get_tolerances()
    finally:
        set_tolerances(previous)
