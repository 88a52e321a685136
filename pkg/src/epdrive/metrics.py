"""Tomography-style observables and loop-level summaries."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .counterdiabatic import CDMode
from .errors import NotADensityMatrix
from .paths import ControlSchedule, enclosed_ep_count, tracked_angle
from .propagator import Trajectory
from .spectrum import IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z

DENSITY_TOL = 1e-10
REPORT_GRID = 51  # tomography reporting grid per loop


def density_from_bloch(r) -> np.ndarray:
    """rho = (I + x sigma_x + y sigma_y + z sigma_z) / 2."""
    x, y, z = r
    return 0.5 * (IDENTITY + x * SIGMA_X + y * SIGMA_Y + z * SIGMA_Z)


def pure_density(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def _validate_density(rho: np.ndarray, name: str) -> None:
    rho = np.asarray(rho)
    if rho.shape != (2, 2):
        raise NotADensityMatrix(f"{name} must be 2x2, got shape {rho.shape}")
    if np.linalg.norm(rho - rho.conj().T) > DENSITY_TOL:
        raise NotADensityMatrix(f"{name} is not Hermitian within {DENSITY_TOL}")
    if abs(np.trace(rho) - 1.0) > DENSITY_TOL:
        raise NotADensityMatrix(f"{name} trace {np.trace(rho):.6g} != 1")
    if np.min(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))) < -DENSITY_TOL:
        raise NotADensityMatrix(f"{name} is not positive semidefinite within {DENSITY_TOL}")


def trace_distance(rho_a: np.ndarray, rho_b: np.ndarray) -> float:
    """D = Tr sqrt((rho_a - rho_b)^dag (rho_a - rho_b)) / 2 = half the sum of singular values."""
    _validate_density(rho_a, "rho_a")
    _validate_density(rho_b, "rho_b")
    return 0.5 * float(np.sum(np.linalg.svd(np.asarray(rho_a) - np.asarray(rho_b), compute_uv=False)))


@dataclass(frozen=True)
class LoopSummary:
    avg_trace_distance: float  # on the 51-point reporting grid
    avg_trace_distance_fine: float
    endpoint_x: float
    enclosed_eps: int
    direction: str
    cd_mode: Optional[CDMode]
    period: float
    max_a: Optional[float] = None

    def as_json(self) -> dict:
        return {
            "T": self.period,
            "direction": self.direction,
            "cdMode": self.cd_mode.value if self.cd_mode is not None else None,
            "Dbar": self.avg_trace_distance,
            "DbarFine": self.avg_trace_distance_fine,
            "xT": self.endpoint_x,
            "enclosedEPs": self.enclosed_eps,
            "maxA": self.max_a,
        }


def _report_grid_values(times: np.ndarray, values: np.ndarray) -> np.ndarray:
    grid = np.linspace(times[0], times[-1], REPORT_GRID)
    return np.interp(grid, times, values)


def summarize_loop(
    trajectory: Trajectory,
    schedule: ControlSchedule,
    max_a: float | None = None,
) -> LoopSummary:
    """D-bar, endpoint x, and the enclosed-EP count for one closed loop."""
    d = trajectory.trace_distance_series()
    return LoopSummary(
        avg_trace_distance=float(np.mean(_report_grid_values(trajectory.times, d))),
        avg_trace_distance_fine=float(np.mean(d)),
        endpoint_x=float(trajectory.pauli[-1, 0]),
        enclosed_eps=enclosed_ep_count(tracked_angle(schedule)),
        direction=schedule.direction,
        cd_mode=trajectory.cd_mode,
        period=schedule.period,
        max_a=max_a,
    )
