"""Adiabaticity diagnostic with the gain/loss exponent.

    a_nm(t) = |<L_n|d_t R_m>| / |lambda_n - lambda_m| * exp(-I_nm(t)),
    I_nm(t) = Im[ int_0^t (lambda_m - lambda_n) dt' ].

The first factor is the usual gap criterion; the exponential is unique to
complex spectra and favors the eigenstate with relative gain.  a_nm << 1
suppresses transitions out of |R_m>.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .counterdiabatic import left_dright_matrix
from .errors import DegenerateGap
from .paths import ControlSchedule, TrackedPath, tracked_angle

GAP_TOL = 1e-9  # rad/us

_IDX = {"+": 0, "-": 1}


def eigenvalue_arrays(path: TrackedPath) -> tuple[np.ndarray, np.ndarray]:
    """(lambda_plus, lambda_minus) along the path, branch-tied to alpha."""
    sin_a = np.sin(path.alpha)
    cos_a = np.cos(path.alpha)
    use_sin = np.abs(sin_a) >= np.abs(cos_a)
    energy = path.energy
    xi = np.empty_like(path.alpha)
    xi[use_sin] = path.amp[use_sin] / sin_a[use_sin]
    xi[~use_sin] = energy[~use_sin] / cos_a[~use_sin]
    return energy + xi, energy - xi


@dataclass(frozen=True)
class AdiabaticityReport:
    pair: tuple[str, str]  # (n, m)
    times: np.ndarray
    a_values: np.ndarray
    i_exponent: np.ndarray  # I_nm(t)
    max_a: float
    breakdown_windows: list[tuple[float, float]]  # intervals with a_nm > 1
    imag_crossing: bool  # Im(lambda_m - lambda_n) changes sign mid-path


def _breakdown_windows(times: np.ndarray, a: np.ndarray) -> list[tuple[float, float]]:
    above = a > 1.0
    windows = []
    start = None
    for t, flag in zip(times, above):
        if flag and start is None:
            start = t
        elif not flag and start is not None:
            windows.append((float(start), float(t)))
            start = None
    if start is not None:
        windows.append((float(start), float(times[-1])))
    # Merge windows separated by sub-resolution dips (e.g. the isolated
    # alpha_dot = 0 sample when the loop touches J = 0 mid-path).
    gap_tol = 2.0 * float(np.median(np.diff(times))) if len(times) > 1 else 0.0
    merged: list[tuple[float, float]] = []
    for w in windows:
        if merged and w[0] - merged[-1][1] <= gap_tol:
            merged[-1] = (merged[-1][0], w[1])
        else:
            merged.append(w)
    return merged


def adiabaticity_parameter(path: TrackedPath, pair: tuple[str, str] = ("+", "-")) -> AdiabaticityReport:
    """Evaluate a_nm(t) along a branch-tracked path for the (n, m) label pair."""
    n_idx, m_idx = _IDX[pair[0]], _IDX[pair[1]]
    if n_idx == m_idx:
        raise ValueError("pair must name two distinct eigenstates")
    lam = eigenvalue_arrays(path)
    gap = lam[n_idx] - lam[m_idx]
    if np.any(np.abs(gap) < GAP_TOL):
        k = int(np.argmin(np.abs(gap)))
        raise DegenerateGap(
            f"|lambda_n - lambda_m| = {np.abs(gap[k]):.3e} rad/us at t={path.times[k]:.6g} us"
        )
    coupling = left_dright_matrix(path)[:, n_idx, m_idx]
    diff = lam[m_idx] - lam[n_idx]
    i_exp = cumulative_trapezoid(diff.imag, path.times, initial=0.0)
    a = np.abs(coupling) / np.abs(gap) * np.exp(-i_exp)
    crossing = bool(np.any(diff.imag[:-1] * diff.imag[1:] < 0))
    return AdiabaticityReport(
        pair=pair,
        times=path.times,
        a_values=a,
        i_exponent=i_exp,
        max_a=float(np.max(a)),
        breakdown_windows=_breakdown_windows(path.times, a),
        imag_crossing=crossing,
    )


def sweep_max_a(
    schedule_factory: Callable[[float, str], ControlSchedule],
    periods: Sequence[float],
    directions: Sequence[str] = ("cw", "ccw"),
    pair: tuple[str, str] = ("+", "-"),
) -> list[dict]:
    """max_t[a_nm] for each (loop period, encircling direction).

    The pair fixes the initialized eigenstate m; the gap factor is direction
    symmetric, so any asymmetry comes from the gain/loss exponent.
    """
    rows = []
    for T in periods:
        for direction in directions:
            path = tracked_angle(schedule_factory(float(T), direction))
            report = adiabaticity_parameter(path, pair)
            rows.append({"T": float(T), "direction": direction, "maxA": report.max_a})
    return rows


def cosine_sweep_family(kappa: float, j_min: float, j_max: float, delta_amp_magnitude: float):
    """Factory of cosine loops sharing geometry, parameterized by (T, direction)."""
    from .paths import cosine_loop

    def factory(T: float, direction: str) -> ControlSchedule:
        sign = -1.0 if direction == "cw" else 1.0
        return cosine_loop(T, kappa, j_min, j_max, sign * delta_amp_magnitude)

    return factory
