"""Norm-tracked time evolution under time-dependent non-Hermitian Hamiltonians.

Fixed-step RK4 on the unnormalized state with per-step renormalization models
the postselected no-jump dynamics: the stored states are unit vectors and the
accumulated log-norm carries the relative-amplitude information.  Stochastic
jumps and decoherence are deliberately not modeled.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from ._kernels import rk4_lognorm
from .counterdiabatic import CDMode, cd_exact, cd_hermitian_approx, eigvector_arrays
from .errors import NonFiniteState, StepTooLarge
from .paths import ControlSchedule, TrackedPath, tracked_angle

DEFAULT_STEPS = 20000
STEP_GUARD = 0.1  # max allowed dt * ||H||


def pauli_expectations(states: np.ndarray) -> np.ndarray:
    """(x, y, z) triples for an array of normalized 2-vectors."""
    cross = np.conj(states[:, 0]) * states[:, 1]
    out = np.empty((len(states), 3))
    out[:, 0] = 2.0 * cross.real
    out[:, 1] = 2.0 * cross.imag
    out[:, 2] = np.abs(states[:, 0]) ** 2 - np.abs(states[:, 1]) ** 2
    return out


@dataclass(frozen=True)
class Trajectory:
    """Time-sampled normalized states with log-norm and Bloch diagnostics."""

    times: np.ndarray
    states: np.ndarray  # (n+1, 2), unit norm
    log_norm: np.ndarray
    pauli: np.ndarray  # (n+1, 3)
    reference: Optional[np.ndarray] = None  # instantaneous-eigenstate triples
    cd_mode: Optional[CDMode] = None

    def trace_distance_series(self) -> np.ndarray:
        """Pointwise trace distance to the instantaneous-eigenstate reference.

        For Bloch vectors r, r_I this is |r - r_I| / 2 exactly.
        """
        if self.reference is None:
            raise ValueError("trajectory has no reference triples")
        return 0.5 * np.linalg.norm(self.pauli - self.reference, axis=1)

    def write_csv(self, path) -> None:
        """Columns: t,x,y,z,x_I,y_I,z_I,logNorm,D."""
        ref = self.reference if self.reference is not None else np.full_like(self.pauli, np.nan)
        d = self.trace_distance_series() if self.reference is not None else np.full(len(self.times), np.nan)
        cols = np.column_stack([self.times, self.pauli, ref, self.log_norm, d])
        header = "t,x,y,z,x_I,y_I,z_I,logNorm,D"
        with open(path, "w") as fh:
            fh.write(header + "\n")
            for row in cols:
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def _clamp_entries(h: np.ndarray, clamp: float) -> np.ndarray:
    mag = np.abs(h)
    over = mag > clamp
    if np.any(over):
        h = h.copy()
        h[over] *= clamp / mag[over]
    return h


def _check_step(h_half: np.ndarray, dt: float) -> None:
    max_norm = float(np.max(np.linalg.norm(h_half, axis=(1, 2))))
    if dt * max_norm > STEP_GUARD:
        raise StepTooLarge(
            f"dt*max||H|| = {dt * max_norm:.3g} > {STEP_GUARD}; reduce dt"
        )


def _run_kernel(h_half: np.ndarray, psi0: np.ndarray, dt: float, n: int):
    states = np.empty((n + 1, 2), dtype=complex)
    log_norm = np.empty(n + 1)
    flag = rk4_lognorm(np.ascontiguousarray(h_half), np.asarray(psi0, dtype=complex), dt, states, log_norm)
    if flag != 0:
        raise NonFiniteState("state overflowed or vanished despite renormalization")
    return states, log_norm


def evolve(
    hamiltonian: Union[Callable[[np.ndarray], np.ndarray], np.ndarray],
    initial_state: np.ndarray,
    T: float,
    dt: float,
    drive_clamp: float | None = None,
) -> Trajectory:
    """Integrate dpsi/dt = -i H(t) psi over [0, T] with fixed-step RK4.

    ``hamiltonian`` is either a constant 2x2 matrix or a callable mapping an
    array of times to a stacked (m, 2, 2) array.  When ``drive_clamp`` is set,
    every Hamiltonian entry with magnitude above the clamp is saturated.
    """
    if T <= 0 or dt <= 0:
        raise ValueError("T and dt must be positive")
    psi0 = np.asarray(initial_state, dtype=complex)
    if np.linalg.norm(psi0) == 0:
        raise ValueError("initial state must be nonzero")
    n = max(1, round(T / dt))
    dt = T / n
    t_half = np.linspace(0.0, T, 2 * n + 1)
    if callable(hamiltonian):
        h_half = np.asarray(hamiltonian(t_half), dtype=complex)
    else:
        h_half = np.broadcast_to(np.asarray(hamiltonian, dtype=complex), (2 * n + 1, 2, 2)).copy()
    if drive_clamp is not None:
        h_half = _clamp_entries(h_half, drive_clamp)
    _check_step(h_half, dt)
    states, log_norm = _run_kernel(h_half, psi0, dt, n)
    return Trajectory(
        times=t_half[::2].copy(),
        states=states,
        log_norm=log_norm,
        pauli=pauli_expectations(states),
    )


def effective_hamiltonian_table(schedule: ControlSchedule, t: np.ndarray) -> np.ndarray:
    """H_eff = [[2E, J*], [J, 0]] sampled on a time grid."""
    t = np.asarray(t, dtype=float)
    e = schedule.delta_at(t) / 2.0 - 1j * schedule.kappa
    j = np.asarray(schedule.coupling_at(t), dtype=complex)
    h = np.zeros((len(t), 2, 2), dtype=complex)
    h[:, 0, 0] = 2.0 * e
    h[:, 0, 1] = np.conj(j)
    h[:, 1, 0] = j
    return h


def reference_triples(path: TrackedPath, label: str = "R-") -> np.ndarray:
    """Bloch triples of the branch-tracked normalized instantaneous eigenstate.

    Continuity tracking makes the label follow the eigenvalue sheet, which on
    single-EP loops reproduces the mid-loop label switch.
    """
    r_plus, r_minus, _, _ = eigvector_arrays(path.alpha, path.phi)
    vec = r_minus if label == "R-" else r_plus
    norms = np.linalg.norm(vec, axis=1)
    return pauli_expectations(vec / norms[:, None])


def evolve_with_cd(
    schedule: ControlSchedule,
    cd_mode: CDMode = CDMode.NONE,
    initial: Union[str, np.ndarray] = "R-",
    T: float | None = None,
    dt: float | None = None,
    drive_clamp: float | None = None,
    reference_label: str | None = None,
) -> Trajectory:
    """Propagate H_eff(t) plus the selected counterdiabatic drive over one loop.

    ``initial`` is "R-", "R+", or a custom 2-vector; the reference follows the
    branch-tracked eigenstate of the matching (or requested) label.  A drive
    clamp saturates entries of the CD drive only, modeling the apparatus limit.
    """
    T = schedule.period if T is None else T
    dt = T / DEFAULT_STEPS if dt is None else dt
    n = max(1, round(T / dt))
    dt = T / n
    t_half = np.linspace(0.0, T, 2 * n + 1)

    h_half = effective_hamiltonian_table(schedule, t_half)
    path = tracked_angle(schedule, n_samples=n + 1)
    if cd_mode is not CDMode.NONE:
        drive = cd_exact(path)
        if cd_mode is CDMode.HERMITIAN_ONLY:
            drive = cd_hermitian_approx(drive)
        elif cd_mode is not CDMode.FULL:
            raise ValueError(f"unsupported propagation mode {cd_mode}")
        h_cd = drive.h_full_at(t_half)
        if drive_clamp is not None:
            h_cd = _clamp_entries(h_cd, drive_clamp)
        h_half = h_half + h_cd
    _check_step(h_half, dt)

    if isinstance(initial, str):
        r_plus, r_minus, _, _ = eigvector_arrays(path.alpha[:1], path.phi[:1])
        vec = {"R-": r_minus, "R+": r_plus}[initial][0]
        psi0 = vec / np.linalg.norm(vec)
        label = reference_label if reference_label is not None else initial
    else:
        psi0 = np.asarray(initial, dtype=complex)
        label = reference_label if reference_label is not None else "R-"

    states, log_norm = _run_kernel(h_half, psi0, dt, n)
    return Trajectory(
        times=t_half[::2].copy(),
        states=states,
        log_norm=log_norm,
        pauli=pauli_expectations(states),
        reference=reference_triples(path, label),
        cd_mode=cd_mode,
    )
