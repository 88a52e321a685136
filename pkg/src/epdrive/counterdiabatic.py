"""Counterdiabatic drive synthesis.

The exact counterdiabatic Hamiltonian along a path (alpha_t, phi_t) is

    H_CD = (phi_dot/2) sigma_z + (alpha_dot/2) R_z(phi) sigma_y R_z(phi)^dag,

reducing to (alpha_dot/2) sigma_y for real coupling.  Because alpha is complex
the drive is generally non-Hermitian; the Hermitian part is the implementable
approximation, and the anti-Hermitian part vanishes exactly on paths with
constant alpha_I (Apollonius circles / tori).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import PathTooCloseToEP
from .paths import EP_PATH_MARGIN, ControlSchedule, TrackedPath
from .spectrum import IDENTITY, SIGMA_Y, SIGMA_Z


class CDMode(enum.Enum):
    NONE = "none"
    FULL = "full"
    HERMITIAN_ONLY = "hermitian"
    PARALLEL_TRANSPORT = "parallel"


# -- biorthogonal eigenvector flow (vectorized over a path) -----------------

def eigvector_arrays(alpha: np.ndarray, phi: np.ndarray):
    """Parameterized eigenvectors R+/-, L+/- at each sample; shape (n, 2).

    R_pm = R_z(phi) C_y(alpha)|z_pm>, L_pm = <z_pm| C_y(-alpha) R_z(-phi);
    L rows pair with R columns through a plain dot product.
    """
    c = np.cos(alpha / 2.0)
    s = np.sin(alpha / 2.0)
    em = np.exp(-0.5j * phi)  # e^{-i phi/2}
    ep = np.exp(+0.5j * phi)
    r_plus = np.stack([em * c, ep * s], axis=-1)
    r_minus = np.stack([-em * s, ep * c], axis=-1)
    l_plus = np.stack([ep * c, em * s], axis=-1)
    l_minus = np.stack([-ep * s, em * c], axis=-1)
    return r_plus, r_minus, l_plus, l_minus


def eigvector_derivatives(alpha, phi, alpha_dot, phi_dot):
    """Exact time derivatives of the parameterized right eigenvectors.

    d/dt R_n = -i (phi_dot/2) sigma_z R_n + alpha_dot R_z(phi) dC_y/dalpha |z_n>.
    """
    c = np.cos(alpha / 2.0)
    s = np.sin(alpha / 2.0)
    em = np.exp(-0.5j * phi)
    ep = np.exp(+0.5j * phi)
    r_plus, r_minus, _, _ = eigvector_arrays(alpha, phi)
    # dC_y/dalpha columns: (-s/2, c/2) and (-c/2, -s/2)
    d_plus = np.stack([em * (-s / 2.0), ep * (c / 2.0)], axis=-1)
    d_minus = np.stack([em * (-c / 2.0), ep * (-s / 2.0)], axis=-1)
    sz = np.stack([np.ones_like(alpha), -np.ones_like(alpha)], axis=-1)
    w = (-0.5j * phi_dot)[..., None]
    dr_plus = w * sz * r_plus + alpha_dot[..., None] * d_plus
    dr_minus = w * sz * r_minus + alpha_dot[..., None] * d_minus
    return dr_plus, dr_minus


def left_dright_matrix(path: TrackedPath) -> np.ndarray:
    """M[k, n, m] = <L_n | d/dt R_m> at each path sample (n, m in {+, -} -> 0, 1)."""
    _, _, l_plus, l_minus = eigvector_arrays(path.alpha, path.phi)
    dr_plus, dr_minus = eigvector_derivatives(path.alpha, path.phi, path.alpha_dot, path.phi_dot)
    m = np.empty((len(path), 2, 2), dtype=complex)
    m[:, 0, 0] = np.einsum("ki,ki->k", l_plus, dr_plus)
    m[:, 0, 1] = np.einsum("ki,ki->k", l_plus, dr_minus)
    m[:, 1, 0] = np.einsum("ki,ki->k", l_minus, dr_plus)
    m[:, 1, 1] = np.einsum("ki,ki->k", l_minus, dr_minus)
    return m


def berry_connection_integral(path: TrackedPath, sign: int = +1) -> complex:
    """Accumulated dynamical-phase integrand int <L_pm| d/dt R_pm> dt over the path."""
    m = left_dright_matrix(path)
    idx = 0 if sign > 0 else 1
    return complex(np.trapezoid(m[:, idx, idx], path.times))


# -- drive container --------------------------------------------------------

@dataclass(frozen=True)
class CDDrive:
    """Sampled counterdiabatic drive plus an exact evaluator for propagation.

    h_full = h_hermitian + h_anti pointwise; j_cd = alpha_dot_I/2 - i alpha_dot_R/2.
    delta_cd is the |z+><z+| coefficient of the Hermitian part rewritten in the
    drive form delta_cd |z+><z+| + sy sigma_y + sx sigma_x + offset * I; the
    identity offset is recorded but never applied (normalized dynamics are
    invariant under it).
    """

    mode: CDMode
    times: np.ndarray
    h_full: np.ndarray  # (n, 2, 2)
    h_hermitian: np.ndarray
    h_anti: np.ndarray
    j_cd: np.ndarray
    delta_cd: np.ndarray
    identity_offset: np.ndarray
    _eval: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)
    beta: Optional[np.ndarray] = None
    hermitian_condition: Optional[bool] = None

    def h_full_at(self, t: np.ndarray) -> np.ndarray:
        """Drive matrices at arbitrary times (exact where a closure exists)."""
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if self._eval is not None:
            return self._eval(t)
        out = np.empty((len(t), 2, 2), dtype=complex)
        for i in range(2):
            for j in range(2):
                out[:, i, j] = np.interp(t, self.times, self.h_full[:, i, j].real) + 1j * np.interp(
                    t, self.times, self.h_full[:, i, j].imag
                )
        return out

    def hermitian_at(self, t: np.ndarray) -> np.ndarray:
        h = self.h_full_at(t)
        return 0.5 * (h + np.conj(np.swapaxes(h, -1, -2)))


def _hermitian_split(h: np.ndarray):
    h_dag = np.conj(np.swapaxes(h, -1, -2))
    return 0.5 * (h + h_dag), 0.5 * (h - h_dag)


def drive_form_coefficients(h_hermitian: np.ndarray):
    """Rewrite a Hermitian matrix field as delta_cd |z+><z+| + sy sigma_y + sx sigma_x + offset I."""
    a = 0.5 * np.real(h_hermitian[..., 0, 0] + h_hermitian[..., 1, 1])
    bz = 0.5 * np.real(h_hermitian[..., 0, 0] - h_hermitian[..., 1, 1])
    bx = np.real(h_hermitian[..., 0, 1])
    by = -np.imag(h_hermitian[..., 0, 1])
    return 2.0 * bz, by, bx, a - bz


def _assemble_exact(alpha_dot: np.ndarray, phi: np.ndarray, phi_dot: np.ndarray) -> np.ndarray:
    """H_CD = (phi_dot/2) sigma_z + (alpha_dot/2) R_z sigma_y R_z^dag."""
    n = len(alpha_dot)
    h = np.zeros((n, 2, 2), dtype=complex)
    h[:, 0, 0] = 0.5 * phi_dot
    h[:, 1, 1] = -0.5 * phi_dot
    h[:, 0, 1] = 0.5 * alpha_dot * (-1j) * np.exp(-1j * phi)
    h[:, 1, 0] = 0.5 * alpha_dot * (+1j) * np.exp(+1j * phi)
    return h


def _schedule_alpha_dot(schedule: ControlSchedule, t: np.ndarray):
    amp = schedule.amp_at(t)
    delta = schedule.delta_at(t)
    energy = delta / 2.0 - 1j * schedule.kappa
    d = np.minimum(np.abs(energy + 1j * amp), np.abs(energy - 1j * amp))
    if np.any(d < EP_PATH_MARGIN):
        k = int(np.argmin(d))
        raise PathTooCloseToEP(
            f"drive evaluation within {d[k]:.3e} rad/us of an EP at t={t[k]:.6g} us",
            t=float(t[k]),
        )
    return (schedule.damp_at(t) * energy - amp * schedule.ddelta_at(t) / 2.0) / (
        energy * energy + amp * amp
    )


def _make_drive(mode, times, h_full, closure=None, **extra) -> CDDrive:
    h_h, h_ah = _hermitian_split(h_full)
    delta_cd, _, _, offset = drive_form_coefficients(h_h)
    j_cd = extra.pop("j_cd", None)
    if j_cd is None:
        # phi = 0 form is H = i J_CD sigma_y, so J_CD sits in the (0, 1) entry.
        j_cd = h_full[:, 0, 1].copy()
    return CDDrive(
        mode=mode,
        times=times,
        h_full=h_full,
        h_hermitian=h_h,
        h_anti=h_ah,
        j_cd=j_cd,
        delta_cd=delta_cd,
        identity_offset=offset,
        _eval=closure,
        **extra,
    )


def cd_exact(path: TrackedPath) -> CDDrive:
    """Exact counterdiabatic drive along a tracked path.

    The returned drive evaluates analytically at arbitrary times from the
    schedule, so fixed-step integration is not limited to the path grid.
    """
    schedule = path.schedule

    def closure(t: np.ndarray) -> np.ndarray:
        return _assemble_exact(_schedule_alpha_dot(schedule, t), schedule.phi_at(t), schedule.dphi_at(t))

    h_full = _assemble_exact(path.alpha_dot, path.phi, path.phi_dot)
    j_cd = path.alpha_dot.imag / 2.0 - 1j * path.alpha_dot.real / 2.0
    return _make_drive(CDMode.FULL, path.times, h_full, closure=closure, j_cd=j_cd)


def cd_general_form(path: TrackedPath, step: float | None = None) -> CDDrive:
    """Independent synthesis from numerically differentiated eigenvectors.

    H_CD(t) = i sum_n [ |d_t R_n><L_n| - <L_n|d_t R_n> |R_n><L_n| ], with the
    derivatives from a fourth-order central stencil on the branch-tracked
    parameterized eigenvectors (default step T / (10 n)).
    """
    h = step if step is not None else path.period / (10.0 * len(path))
    schedule = path.schedule
    offsets = np.array([-2.0, -1.0, 1.0, 2.0]) * h
    weights = np.array([1.0, -8.0, 8.0, -1.0]) / (12.0 * h)

    t0 = path.times
    seed_r = path.alpha.real
    stack_r_plus = []
    stack_r_minus = []
    for off in offsets:
        t = t0 + off
        amp = schedule.amp_at(t)
        delta = schedule.delta_at(t)
        energy = delta / 2.0 - 1j * schedule.kappa
        zeta = (energy + 1j * amp) / (energy - 1j * amp)
        a_r = 0.5 * np.angle(zeta)
        a_i = -0.5 * np.log(np.abs(zeta))
        a_r = a_r + np.pi * np.rint((seed_r - a_r) / np.pi)
        rp, rm, _, _ = eigvector_arrays(a_r + 1j * a_i, schedule.phi_at(t))
        stack_r_plus.append(rp)
        stack_r_minus.append(rm)

    dr_plus = sum(w * v for w, v in zip(weights, stack_r_plus))
    dr_minus = sum(w * v for w, v in zip(weights, stack_r_minus))
    r_plus, r_minus, l_plus, l_minus = eigvector_arrays(path.alpha, path.phi)

    def ketbra(ket, bra):
        return ket[:, :, None] * bra[:, None, :]

    def pairing(bra, ket):
        return np.einsum("ki,ki->k", bra, ket)

    h_full = 1j * (
        ketbra(dr_plus, l_plus)
        + ketbra(dr_minus, l_minus)
        - pairing(l_plus, dr_plus)[:, None, None] * ketbra(r_plus, l_plus)
        - pairing(l_minus, dr_minus)[:, None, None] * ketbra(r_minus, l_minus)
    )
    return _make_drive(CDMode.FULL, path.times, h_full)


def cd_hermitian_approx(drive: CDDrive) -> CDDrive:
    """Implementable Hermitian-only drive (identity offset dropped)."""
    offset = drive.identity_offset
    h_full = drive.h_hermitian - offset[:, None, None] * IDENTITY
    parent_eval = drive._eval

    closure = None
    if parent_eval is not None:
        def closure(t: np.ndarray) -> np.ndarray:
            h = parent_eval(t)
            h_h = 0.5 * (h + np.conj(np.swapaxes(h, -1, -2)))
            _, _, _, off = drive_form_coefficients(h_h)
            return h_h - off[:, None, None] * IDENTITY

    return _make_drive(CDMode.HERMITIAN_ONLY, drive.times, h_full, closure=closure, j_cd=drive.j_cd)


def cd_parallel_transport(path: TrackedPath) -> CDDrive:
    """Parallel-transport drive with the Berry-connection correction term.

    H_CD_par = (phi_dot/2) sigma_z + (alpha_dot/2) R_z sigma_y R_z^dag
               - (phi_dot/2) cos(alpha) R_z C_y sigma_z C_y^{-1} R_z^dag,

    with beta(t) = -int phi_dot cos(alpha).  The drive is Hermitian precisely
    when alpha_I is constant and (phi_dot = 0 or cos(alpha) = 0) along the path.
    """
    from scipy.integrate import cumulative_trapezoid

    h_full = _assemble_exact(path.alpha_dot, path.phi, path.phi_dot)
    cos_a = np.cos(path.alpha)
    sin_a = np.sin(path.alpha)
    # C_y(alpha) sigma_z C_y(alpha)^{-1} = [[cos a, sin a], [sin a, -cos a]], then R_z phases.
    corr = np.zeros_like(h_full)
    corr[:, 0, 0] = cos_a
    corr[:, 1, 1] = -cos_a
    corr[:, 0, 1] = sin_a * np.exp(-1j * path.phi)
    corr[:, 1, 0] = sin_a * np.exp(+1j * path.phi)
    h_full = h_full - (0.5 * path.phi_dot * cos_a)[:, None, None] * corr

    beta = -cumulative_trapezoid(path.phi_dot * cos_a, path.times, initial=0.0)
    tol = 1e-10
    hermitian = bool(
        np.max(np.abs(path.alpha_dot.imag)) < tol
        and (np.max(np.abs(path.phi_dot)) < tol or np.max(np.abs(cos_a)) < tol)
    )
    j_cd = path.alpha_dot.imag / 2.0 - 1j * path.alpha_dot.real / 2.0
    return _make_drive(
        CDMode.PARALLEL_TRANSPORT,
        path.times,
        h_full,
        j_cd=j_cd,
        beta=beta,
        hermitian_condition=hermitian,
    )
