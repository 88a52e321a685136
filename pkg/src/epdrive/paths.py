"""Time-parameterized control schedules and branch-tracked mixing angles.

A schedule is a path t -> (J(t), Delta(t), phi(t)) over one loop period T.
The canonical loop is the cosine loop

    J(t)     = (J_max - J_min)/2 * cos(2 pi t / T) + (J_max + J_min)/2,
    Delta(t) = Delta_amp * sin(2 pi t / T),

with Delta_amp < 0 a clockwise encircling direction and > 0 counter-clockwise.
Apollonius circles (constant distance ratio to the two exceptional points
eps = +/- i kappa in the eps = Delta/2 + iJ plane) are a special case of the
cosine loop.  Schedules carry analytic derivatives; custom schedules come from
CSV tables through cubic-spline interpolants or from user callables.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    DegenerateRatio,
    HyperbolicSingularity,
    PathTooCloseToEP,
    SamplingTooCoarse,
)
from .spectrum import ComplexAngle, SystemParams, mixing_angle

# Minimum allowed eps-plane distance to an EP along a path, rad/us.
EP_PATH_MARGIN = 1e-6

# Internal fine-grid density for tracking/integration; the experiment's 51
# tomography steps are a reporting grid only.
DEFAULT_SAMPLES = 2001


class ScheduleKind(enum.Enum):
    COSINE_LOOP = "cosine_loop"
    APOLLONIUS_CIRCLE = "apollonius_circle"
    CUSTOM = "custom"


TimeFn = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ControlSchedule:
    """Immutable control path over (J, Delta, phi) with analytic derivatives.

    The coupling is J(t) = amp(t) * exp(i phi(t)) with a real signed amplitude;
    a negative amplitude at phi = 0 represents real negative coupling, keeping
    loops that cross J = 0 smooth.
    """

    period: float
    kappa: float
    j_min: float = 0.0
    j_max: float = 0.0
    delta_amp: float = 0.0
    kind: ScheduleKind = ScheduleKind.COSINE_LOOP
    n_samples: int = DEFAULT_SAMPLES
    amp_fn: Optional[TimeFn] = field(default=None, repr=False)
    damp_fn: Optional[TimeFn] = field(default=None, repr=False)
    delta_fn: Optional[TimeFn] = field(default=None, repr=False)
    ddelta_fn: Optional[TimeFn] = field(default=None, repr=False)
    phi_fn: Optional[TimeFn] = field(default=None, repr=False)
    dphi_fn: Optional[TimeFn] = field(default=None, repr=False)

    def __post_init__(self):
        if self.period <= 0:
            raise ValueError(f"period must be positive, got {self.period}")
        if self.n_samples < 2:
            raise ValueError(f"n_samples must be >= 2, got {self.n_samples}")
        if self.kind is ScheduleKind.CUSTOM and (self.amp_fn is None or self.delta_fn is None):
            raise ValueError("custom schedules need amp_fn and delta_fn")

    # -- coupling amplitude and detuning -----------------------------------
    def _omega(self) -> float:
        return 2.0 * math.pi / self.period

    def amp_at(self, t):
        if self.kind is ScheduleKind.CUSTOM:
            return np.asarray(self.amp_fn(np.asarray(t, dtype=float)), dtype=float)
        half = 0.5 * (self.j_max - self.j_min)
        mid = 0.5 * (self.j_max + self.j_min)
        return half * np.cos(self._omega() * np.asarray(t, dtype=float)) + mid

    def damp_at(self, t):
        if self.kind is ScheduleKind.CUSTOM:
            return np.asarray(self.damp_fn(np.asarray(t, dtype=float)), dtype=float)
        half = 0.5 * (self.j_max - self.j_min)
        w = self._omega()
        return -half * w * np.sin(w * np.asarray(t, dtype=float))

    def delta_at(self, t):
        if self.kind is ScheduleKind.CUSTOM:
            return np.asarray(self.delta_fn(np.asarray(t, dtype=float)), dtype=float)
        return self.delta_amp * np.sin(self._omega() * np.asarray(t, dtype=float))

    def ddelta_at(self, t):
        if self.kind is ScheduleKind.CUSTOM:
            return np.asarray(self.ddelta_fn(np.asarray(t, dtype=float)), dtype=float)
        w = self._omega()
        return self.delta_amp * w * np.cos(w * np.asarray(t, dtype=float))

    def phi_at(self, t):
        if self.phi_fn is None:
            return np.zeros_like(np.asarray(t, dtype=float))
        return np.asarray(self.phi_fn(np.asarray(t, dtype=float)), dtype=float)

    def dphi_at(self, t):
        if self.dphi_fn is None:
            return np.zeros_like(np.asarray(t, dtype=float))
        return np.asarray(self.dphi_fn(np.asarray(t, dtype=float)), dtype=float)

    def coupling_at(self, t):
        amp = self.amp_at(t)
        if self.phi_fn is None:
            return amp.astype(complex) if isinstance(amp, np.ndarray) else complex(amp)
        return amp * np.exp(1j * self.phi_at(t))

    def params_at(self, t: float) -> SystemParams:
        return SystemParams(
            delta=float(self.delta_at(t)),
            coupling=complex(self.coupling_at(t)),
            kappa=self.kappa,
        )

    def epsilon_at(self, t):
        """eps = Delta/2 + i*J on the real-coupling plane."""
        return self.delta_at(t) / 2.0 + 1j * self.amp_at(t)

    @property
    def direction(self) -> str:
        return "cw" if self.delta_amp < 0 else "ccw"

    def reversed(self) -> "ControlSchedule":
        """The same geometric path traversed backward (t -> T - t)."""
        if self.kind is not ScheduleKind.CUSTOM:
            return replace(self, delta_amp=-self.delta_amp)
        T = self.period
        return replace(
            self,
            amp_fn=lambda t: self.amp_fn(T - np.asarray(t, dtype=float)),
            damp_fn=lambda t: -self.damp_fn(T - np.asarray(t, dtype=float)),
            delta_fn=lambda t: self.delta_fn(T - np.asarray(t, dtype=float)),
            ddelta_fn=lambda t: -self.ddelta_fn(T - np.asarray(t, dtype=float)),
            phi_fn=None if self.phi_fn is None else (lambda t: self.phi_fn(T - np.asarray(t, dtype=float))),
            dphi_fn=None if self.dphi_fn is None else (lambda t: -self.dphi_fn(T - np.asarray(t, dtype=float))),
        )


def cosine_loop(
    period: float,
    kappa: float,
    j_min: float,
    j_max: float,
    delta_amp: float,
    n_samples: int = DEFAULT_SAMPLES,
) -> ControlSchedule:
    return ControlSchedule(
        period=period,
        kappa=kappa,
        j_min=j_min,
        j_max=j_max,
        delta_amp=delta_amp,
        kind=ScheduleKind.COSINE_LOOP,
        n_samples=n_samples,
    )


def sample_cosine_loop(schedule: ControlSchedule, t: float) -> SystemParams:
    """Eq.-(5)-style loop sample; J(0) = J_max, Delta(0) = 0."""
    if schedule.kind is ScheduleKind.CUSTOM:
        raise ValueError("sample_cosine_loop expects a cosine-loop schedule")
    return schedule.params_at(t)


@dataclass(frozen=True)
class ApolloniusCircle:
    """Circle |(eps + i k)/(eps - i k)| = r in the (J, Delta/2) plane."""

    ratio: float
    kappa: float
    center: float  # on the J axis, rad/us
    radius: float  # rad/us

    @property
    def alpha_i(self) -> float:
        """Constant hyperbolic angle on the circle: J_min = kappa * tanh(alpha_i)."""
        return 0.5 * abs(math.log(self.ratio))


def apollonius_from_ratio(
    r: float,
    kappa: float,
    period: float = 0.2,
    direction: str = "ccw",
    n_samples: int = DEFAULT_SAMPLES,
) -> tuple[ApolloniusCircle, ControlSchedule]:
    """Apollonius circle with distance ratio r, and the equivalent loop schedule.

    center c = kappa (1 + r^2)/(1 - r^2), radius R = 2 kappa r / |1 - r^2|;
    the schedule has J_min = c - R, J_max = c + R, Delta amplitude 2R.
    """
    if r <= 0:
        raise ValueError(f"ratio must be positive, got {r}")
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    if abs(r - 1.0) < 1e-12:
        raise DegenerateRatio("r = 1 degenerates the circle into the Delta axis")
    center = kappa * (1.0 + r * r) / (1.0 - r * r)
    radius = 2.0 * kappa * r / abs(1.0 - r * r)
    sign = -1.0 if direction == "cw" else 1.0
    schedule = ControlSchedule(
        period=period,
        kappa=kappa,
        j_min=center - radius,
        j_max=center + radius,
        delta_amp=sign * 2.0 * radius,
        kind=ScheduleKind.APOLLONIUS_CIRCLE,
        n_samples=n_samples,
    )
    return ApolloniusCircle(ratio=r, kappa=kappa, center=center, radius=radius), schedule


def j_delta_from_angles(alpha_r: float, alpha_i: float, kappa: float) -> tuple[float, float]:
    """(Delta, |J|) from the rotation and hyperbolic angles.

    Delta = 2 kappa sin(2 a_r)/sinh(2 a_i);  |J| = kappa (cosh(2 a_i) - cos(2 a_r))/sinh(2 a_i).
    """
    if alpha_i == 0.0:
        raise HyperbolicSingularity("alpha_i = 0: Delta and |J| diverge unless alpha_r = 0")
    s = math.sinh(2.0 * alpha_i)
    delta = 2.0 * kappa * math.sin(2.0 * alpha_r) / s
    j = kappa * (math.cosh(2.0 * alpha_i) - math.cos(2.0 * alpha_r)) / s
    return delta, j


def torus_schedule(
    alpha_i: float,
    kappa: float,
    omega: float,
    nu: float,
    period: float,
    alpha_r0: float = 0.0,
    n_samples: int = DEFAULT_SAMPLES,
) -> ControlSchedule:
    """Constant-(omega, nu) path on an Apollonius torus.

    alpha_r(t) = alpha_r0 + omega t at fixed alpha_i, with phi(t) = nu t.
    One winding of the torus minor radius corresponds to alpha_r advancing by
    pi (each parameter-space loop covers half the Bloch trajectory).
    """
    if alpha_i <= 0.0:
        raise HyperbolicSingularity("torus paths need alpha_i > 0")
    sh = math.sinh(2.0 * alpha_i)
    ch = math.cosh(2.0 * alpha_i)

    def a_r(t):
        return alpha_r0 + omega * np.asarray(t, dtype=float)

    return ControlSchedule(
        period=period,
        kappa=kappa,
        kind=ScheduleKind.CUSTOM,
        n_samples=n_samples,
        amp_fn=lambda t: kappa * (ch - np.cos(2.0 * a_r(t))) / sh,
        damp_fn=lambda t: 2.0 * kappa * omega * np.sin(2.0 * a_r(t)) / sh,
        delta_fn=lambda t: 2.0 * kappa * np.sin(2.0 * a_r(t)) / sh,
        ddelta_fn=lambda t: 4.0 * kappa * omega * np.cos(2.0 * a_r(t)) / sh,
        phi_fn=lambda t: nu * np.asarray(t, dtype=float),
        dphi_fn=lambda t: nu * np.ones_like(np.asarray(t, dtype=float)),
    )


def custom_from_csv(path, kappa: float, period: float | None = None, n_samples: int = DEFAULT_SAMPLES) -> ControlSchedule:
    """Schedule from a CSV table with header ``t,J_x,J_y,delta``.

    Cubic-spline interpolation; derivatives come from the interpolant.
    """
    from scipy.interpolate import CubicSpline

    data = np.genfromtxt(path, delimiter=",", names=True)
    expected = ("t", "J_x", "J_y", "delta")
    names = data.dtype.names
    if names is None or tuple(names) != expected:
        raise ValueError(f"schedule CSV must have header {','.join(expected)}, got {names}")
    t = data["t"]
    jx, jy, delta = data["J_x"], data["J_y"], data["delta"]
    if np.any(jy != 0.0):
        amp = np.hypot(jx, jy)
        phi = np.unwrap(np.arctan2(jy, jx))
        phi_sp = CubicSpline(t, phi)
        phi_fn, dphi_fn = phi_sp, phi_sp.derivative()
    else:
        amp = jx
        phi_fn = dphi_fn = None
    amp_sp = CubicSpline(t, amp)
    delta_sp = CubicSpline(t, delta)
    return ControlSchedule(
        period=period if period is not None else float(t[-1]),
        kappa=kappa,
        kind=ScheduleKind.CUSTOM,
        n_samples=n_samples,
        amp_fn=amp_sp,
        damp_fn=amp_sp.derivative(),
        delta_fn=delta_sp,
        ddelta_fn=delta_sp.derivative(),
        phi_fn=phi_fn,
        dphi_fn=dphi_fn,
    )


@dataclass(frozen=True)
class PathPoint:
    """One sample of a branch-tracked path."""

    t: float
    params: SystemParams
    alpha: ComplexAngle
    alpha_dot: complex
    phi_dot: float


@dataclass(frozen=True)
class TrackedPath:
    """Branch-tracked alpha(t) along a schedule, with analytic derivatives."""

    schedule: ControlSchedule
    times: np.ndarray
    delta: np.ndarray
    amp: np.ndarray
    phi: np.ndarray
    phi_dot: np.ndarray
    alpha: np.ndarray  # complex, branch-continued
    alpha_dot: np.ndarray  # complex
    branch_index: np.ndarray

    @property
    def kappa(self) -> float:
        return self.schedule.kappa

    @property
    def period(self) -> float:
        return self.schedule.period

    @property
    def alpha_r(self) -> np.ndarray:
        return self.alpha.real

    @property
    def alpha_i(self) -> np.ndarray:
        return self.alpha.imag

    @property
    def energy(self) -> np.ndarray:
        return self.delta / 2.0 - 1j * self.kappa

    @property
    def epsilon(self) -> np.ndarray:
        return self.delta / 2.0 + 1j * self.amp

    def __len__(self) -> int:
        return len(self.times)

    def __getitem__(self, k: int) -> PathPoint:
        coupling = self.amp[k] * np.exp(1j * self.phi[k]) if self.phi[k] != 0.0 else complex(self.amp[k])
        return PathPoint(
            t=float(self.times[k]),
            params=SystemParams(float(self.delta[k]), coupling, self.kappa),
            alpha=ComplexAngle(float(self.alpha[k].real), float(self.alpha[k].imag), int(self.branch_index[k])),
            alpha_dot=complex(self.alpha_dot[k]),
            phi_dot=float(self.phi_dot[k]),
        )


def tracked_angle(schedule: ControlSchedule, n_samples: int | None = None) -> TrackedPath:
    """Sample the schedule and analytically continue alpha along it.

    alpha_r is continued by pi-periodic unwrapping of the principal value;
    alpha_dot comes from the chain rule on tan(alpha) = J/E,

        alpha_dot = (J' E - J E') / (E^2 + J^2),

    which for phi = 0 matches (1/2i)[eps'/(eps - ik) - eps'*/(eps* - ik)].
    """
    n = n_samples if n_samples is not None else schedule.n_samples
    t = np.linspace(0.0, schedule.period, n)
    amp = schedule.amp_at(t)
    delta = schedule.delta_at(t)
    # + 0.0 normalizes IEEE negative zero: at Delta = -0.0 the principal angle
    # would otherwise land on the opposite side of the alpha_r = pi/2 branch
    # boundary and swap the eigenstate labels between traversal directions.
    energy = delta / 2.0 + 0.0 - 1j * schedule.kappa

    # EP proximity in the eps-plane (general phi: distance to the exceptional
    # ring |J| = kappa, Delta = 0 reduces to the same expression).
    d_plus = np.abs(energy + 1j * amp)
    d_minus = np.abs(energy - 1j * amp)
    d_min = np.minimum(d_plus, d_minus)
    if np.any(d_min < EP_PATH_MARGIN):
        k = int(np.argmin(d_min))
        raise PathTooCloseToEP(
            f"path within {d_min[k]:.3e} rad/us of an EP at t={t[k]:.6g} us", t=float(t[k])
        )

    zeta = (energy + 1j * amp) / (energy - 1j * amp)
    alpha_r_principal = 0.5 * np.angle(zeta)
    alpha_i = -0.5 * np.log(np.abs(zeta))
    alpha_r = np.unwrap(alpha_r_principal, period=np.pi)
    if np.any(np.abs(np.diff(alpha_r)) >= np.pi / 2):
        raise SamplingTooCoarse(
            "consecutive tracked angles differ by >= pi/2; increase n_samples"
        )
    branch = np.rint((alpha_r - alpha_r_principal) / np.pi).astype(int)

    damp = schedule.damp_at(t)
    ddelta = schedule.ddelta_at(t)
    alpha_dot = (damp * energy - amp * ddelta / 2.0) / (energy * energy + amp * amp)

    return TrackedPath(
        schedule=schedule,
        times=t,
        delta=delta,
        amp=amp,
        phi=schedule.phi_at(t),
        phi_dot=schedule.dphi_at(t),
        alpha=alpha_r + 1j * alpha_i,
        alpha_dot=alpha_dot,
        branch_index=branch,
    )


def winding_numbers(path: TrackedPath) -> tuple[int, int]:
    """Winding of (eps - ik) and (eps + ik) around zero over the loop."""
    eps = path.epsilon
    w = []
    for sign in (-1.0, +1.0):
        ang = np.unwrap(np.angle(eps + sign * 1j * path.kappa))
        w.append(int(np.rint((ang[-1] - ang[0]) / (2.0 * np.pi))))
    return w[0], w[1]


def enclosed_ep_count(path: TrackedPath) -> int:
    """Number of exceptional points (0, 1, or 2) enclosed by the loop."""
    w_minus, w_plus = winding_numbers(path)
    return int(abs(w_minus) != 0) + int(abs(w_plus) != 0)
