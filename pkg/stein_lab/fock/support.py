"""
Support test: |psi> lies in supp A iff f(M) = Tr(|psi><psi| - M A)_+ -> 0 as M -> oo.

f is nonincreasing in M. A vector phi orthogonal to supp A gives the
floor f(M) >= |<psi|phi>|^2 for every M.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Any, Optional, Sequence, Union

import numpy as np
from scipy import linalg as sla

from stein_lab.config import get_tolerances
from stein_lab.errors import ValidationError
from stein_lab.fock.operators import FockOperator
from stein_lab.linalg import StateVector, require_psd, trace_positive_part
from stein_lab.verdicts import CheckRecord, inequality

logger = logging.getLogger(__name__)


class SupportStatus(str, Enum):
    IN_SUPPORT = "in-support"
    NOT_IN_SUPPORT = "not-in-support"
    UNDECIDED = "undecided"


@dataclass(frozen=True)
class SupportReport:
    M_grid: tuple[float, ...]
    values: tuple[float, ...]
    floor: float
    witness: Optional[StateVector]
    tol: float
    noise: float

    @property
    def max_increase(self) -> float:
        if len(self.values) < 2:
            return 0.0
        return float(max(0.0, np.max(np.diff(self.values))))

    @property
    def monotone(self) -> bool:
        return self.max_increase <= self.noise

    @property
    def status(self) -> SupportStatus:
        if self.floor > self.tol:
            return SupportStatus.NOT_IN_SUPPORT
        if self.values and self.values[-1] < self.tol:
            return SupportStatus.IN_SUPPORT
        return SupportStatus.UNDECIDED

    def first_below(self) -> Optional[float]:
        """Smallest M on the grid with f(M) < tol."""
        for m, value in zip(self.M_grid, self.values):
            if value < self.tol:
                return m
        return None

    def monotone_record(self, name: str = "support_monotone") -> CheckRecord:
        return inequality(name, self.max_increase, 0.0, terms={"f": list(self.values), "M": list(self.M_grid)}, tol=self.noise)

    def membership_record(self, name: str = "support_membership") -> CheckRecord:
        """f(M) drops below tol somewhere on the grid."""
        return inequality(
            name,
            min(self.values),
            self.tol,
            terms={"status": self.status.value, "floor": self.floor, "first_M_below": self.first_below()},
            tol=0.0,
        )

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "M": list(self.M_grid),
            "f": list(self.values),
            "floor": self.floor,
            "status": self.status.value,
            "monotone": self.monotone,
            "tol": self.tol,
        }
        if self.witness is not None:
            data["witness"] = self.witness.to_dict()
        return data


def _matrix(A: Union[FockOperator, np.ndarray]) -> np.ndarray:
    return A.matrix if isinstance(A, FockOperator) else np.asarray(A, dtype=complex)


def kernel_floor(psi: StateVector, A: np.ndarray) -> tuple[float, Optional[StateVector]]:
    """||P_ker(A) psi||^2 and the normalised projection, if any."""
    values, vectors = sla.eigh(A)
    scale = max(1.0, float(np.max(np.abs(values), initial=0.0)))
    kernel = vectors[:, values <= get_tolerances().support * scale]
    if kernel.shape[1] == 0:
        return 0.0, None
    projected = kernel @ (kernel.conj().T @ psi.amplitudes)
    mass = float(np.vdot(projected, projected).real)
    if mass <= 0.0:
        return 0.0, None
    return mass, StateVector(projected / np.sqrt(mass))


def support_test(
    psi: StateVector,
    A: Union[FockOperator, np.ndarray],
    M_grid: Sequence[float],
    *,
    tol: Optional[float] = None,
) -> SupportReport:
    a = require_psd(_matrix(A), "A")
    if psi.dim != a.shape[0]:
        raise ValidationError(f"psi has dim {psi.dim}, A has dim {a.shape[0]}", field="psi")
    tol = get_tolerances().membership if tol is None else tol
    grid = tuple(float(m) for m in sorted(M_grid))
    if not grid or grid[0] < 0.0:
        raise ValidationError("M grid must be nonempty and nonnegative", field="M_grid")
    projector = psi.projector()
    values = tuple(trace_positive_part(projector - m * a) for m in grid)
    floor, witness = kernel_floor(psi, a)
    # eigensolver noise grows with the scale of M A
    noise = get_tolerances().witness + 64.0 * np.finfo(float).eps * grid[-1] * float(np.abs(np.trace(a)))
    report = SupportReport(grid, values, floor, witness if floor > tol else None, tol, noise)
    logger.debug("support_test status=%s f_last=%.3e floor=%.3e", report.status.value, values[-1], floor)
    return report
