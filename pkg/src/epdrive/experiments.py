"""Figure-level experiments with deterministic CSV/JSON outputs.

Each runner wires the schedule, counterdiabatic, propagation, adiabaticity and
metrics layers into one reproducible dataset.  Configuration comes from an
INI-style file plus command-line flag overrides; kappa is always derived from
the experimental rates as kappa = (gamma_e - gamma_f) / 4 and never set
independently.  All floats are emitted with 17 significant digits.
"""

from __future__ import annotations

import configparser
import enum
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .adiabaticity import adiabaticity_parameter
from .counterdiabatic import CDMode, cd_exact
from .errors import ConfigError
from .metrics import summarize_loop
from .paths import ControlSchedule, apollonius_from_ratio, cosine_loop, tracked_angle
from .propagator import evolve_with_cd

X_MINUS = np.array([1.0, -1.0]) / math.sqrt(2.0)


class Experiment(enum.Enum):
    ENCIRCLE = "Encircle"
    PERIOD_SWEEP = "PeriodSweep"
    TOPOLOGY_SCAN = "TopologyScan"
    APOLLONIUS_DEVIATION = "ApolloniusDeviation"
    ADIABATICITY_SWEEP = "AdiabaticitySweep"


_CD_ALIASES = {
    "none": CDMode.NONE,
    "hermitian": CDMode.HERMITIAN_ONLY,
    "full": CDMode.FULL,
}
_CD_NAMES = {v: k for k, v in _CD_ALIASES.items()}

_SWEEP_PERIODS = tuple(float(f"{v:.17g}") for v in np.geomspace(0.01, 5.0, 25))

# Per-experiment defaults; the rate pairs reproduce the per-figure kappa values
# (0.29, 0.21, 0.413) rather than one global constant.
_DEFAULTS: dict[Experiment, dict] = {
    Experiment.ENCIRCLE: dict(
        gamma_e=1.37, gamma_f=0.21, period=0.2, j_min=0.0, j_max=30.0,
        delta_amp=10.0 * math.pi, direction="ccw",
    ),
    Experiment.PERIOD_SWEEP: dict(
        gamma_e=1.37, gamma_f=0.21, period=0.2, j_min=0.0, j_max=30.0,
        delta_amp=10.0 * math.pi, direction="ccw", periods=_SWEEP_PERIODS,
    ),
    Experiment.TOPOLOGY_SCAN: dict(
        gamma_e=1.05, gamma_f=0.21, period=0.2, j_min=-1.0, j_max=30.0,
        delta_amp=10.0 * math.pi, direction="cw",
        jmin_start=-1.0, jmin_stop=1.0, jmin_count=41,
    ),
    Experiment.APOLLONIUS_DEVIATION: dict(
        gamma_e=1.862, gamma_f=0.21, period=0.2, j_min=0.007, j_max=30.3,
        delta_amp=0.7 * math.pi, direction="ccw", ratio=0.9733,
    ),
    Experiment.ADIABATICITY_SWEEP: dict(
        gamma_e=1.37, gamma_f=0.21, period=0.2, j_min=0.0, j_max=30.0,
        delta_amp=10.0 * math.pi, direction="ccw", periods=_SWEEP_PERIODS,
    ),
}


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment configuration; kappa = (gamma_e - gamma_f) / 4."""

    experiment: Experiment
    gamma_e: float
    gamma_f: float
    period: float
    j_min: float
    j_max: float
    delta_amp: float  # magnitude; the traversal sign comes from `direction`
    direction: str
    cd_mode: CDMode = CDMode.FULL
    dt: Optional[float] = None
    drive_clamp: Optional[float] = None
    output_dir: str = "out"
    periods: Optional[tuple[float, ...]] = None
    jmin_start: Optional[float] = None
    jmin_stop: Optional[float] = None
    jmin_count: Optional[int] = None
    ratio: Optional[float] = None

    @property
    def kappa(self) -> float:
        return (self.gamma_e - self.gamma_f) / 4.0

    def validate(self) -> "ExperimentConfig":
        if self.gamma_e <= self.gamma_f:
            raise ConfigError(f"physical.gamma_e ({self.gamma_e}) must exceed physical.gamma_f ({self.gamma_f})")
        if self.gamma_f < 0:
            raise ConfigError(f"physical.gamma_f must be nonnegative, got {self.gamma_f}")
        if self.period <= 0:
            raise ConfigError(f"schedule.period must be positive, got {self.period}")
        if self.j_max <= self.j_min:
            raise ConfigError(f"schedule.j_max ({self.j_max}) must exceed schedule.j_min ({self.j_min})")
        if self.delta_amp < 0:
            raise ConfigError(f"schedule.delta_amp is a magnitude and must be nonnegative, got {self.delta_amp}")
        if self.direction not in ("cw", "ccw"):
            raise ConfigError(f"schedule.direction must be 'cw' or 'ccw', got {self.direction!r}")
        if self.dt is not None and self.dt <= 0:
            raise ConfigError(f"run.dt must be positive, got {self.dt}")
        if self.drive_clamp is not None and self.drive_clamp <= 0:
            raise ConfigError(f"run.drive_clamp must be positive, got {self.drive_clamp}")
        if self.periods is not None and any(T <= 0 for T in self.periods):
            raise ConfigError("run.periods must all be positive")
        if self.jmin_count is not None and self.jmin_count < 2:
            raise ConfigError(f"run.jmin_count must be >= 2, got {self.jmin_count}")
        if self.ratio is not None and (self.ratio <= 0 or abs(self.ratio - 1.0) < 1e-12):
            raise ConfigError(f"schedule.ratio must be positive and != 1, got {self.ratio}")
        return self

    def signed_delta_amp(self, direction: str | None = None) -> float:
        d = self.direction if direction is None else direction
        return -self.delta_amp if d == "cw" else self.delta_amp

    def schedule(self, direction: str | None = None, **overrides) -> ControlSchedule:
        return cosine_loop(
            period=overrides.get("period", self.period),
            kappa=self.kappa,
            j_min=overrides.get("j_min", self.j_min),
            j_max=overrides.get("j_max", self.j_max),
            delta_amp=self.signed_delta_amp(direction),
        )


def default_config(experiment: Experiment, **overrides) -> ExperimentConfig:
    base = dict(_DEFAULTS[experiment])
    base.update({k: v for k, v in overrides.items() if v is not None})
    if "periods" in base and base["periods"] is not None:
        base["periods"] = tuple(float(v) for v in base["periods"])
    return ExperimentConfig(experiment=experiment, **base).validate()


def parse_experiment(name: str) -> Experiment:
    flat = name.replace("-", "").replace("_", "").lower()
    for exp in Experiment:
        if exp.value.lower() == flat:
            return exp
    raise ConfigError(f"unknown experiment {name!r}; choose from {[e.value for e in Experiment]}")


_SECTIONS = {
    "experiment": ("experiment",),
    "physical": ("gamma_e", "gamma_f"),
    "schedule": ("period", "j_min", "j_max", "delta_amp", "direction", "ratio"),
    "run": ("cd_mode", "dt", "drive_clamp", "output_dir", "periods", "jmin_start", "jmin_stop", "jmin_count"),
}


def config_to_ini(config: ExperimentConfig) -> str:
    cp = configparser.ConfigParser()
    values = {
        "experiment": config.experiment.value,
        "gamma_e": repr(config.gamma_e),
        "gamma_f": repr(config.gamma_f),
        "period": repr(config.period),
        "j_min": repr(config.j_min),
        "j_max": repr(config.j_max),
        "delta_amp": repr(config.delta_amp),
        "direction": config.direction,
        "ratio": None if config.ratio is None else repr(config.ratio),
        "cd_mode": _CD_NAMES[config.cd_mode],
        "dt": None if config.dt is None else repr(config.dt),
        "drive_clamp": None if config.drive_clamp is None else repr(config.drive_clamp),
        "output_dir": config.output_dir,
        "periods": None if config.periods is None else ",".join(repr(T) for T in config.periods),
        "jmin_start": None if config.jmin_start is None else repr(config.jmin_start),
        "jmin_stop": None if config.jmin_stop is None else repr(config.jmin_stop),
        "jmin_count": None if config.jmin_count is None else str(config.jmin_count),
    }
    for section, keys in _SECTIONS.items():
        cp[section] = {k: values[k] for k in keys if values[k] is not None}
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def config_from_ini(text: str) -> ExperimentConfig:
    cp = configparser.ConfigParser()
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    if not cp.has_option("experiment", "experiment"):
        raise ConfigError("missing required key experiment.experiment")
    experiment = parse_experiment(cp.get("experiment", "experiment"))

    kwargs: dict = {}
    floats = ("gamma_e", "gamma_f", "period", "j_min", "j_max", "delta_amp", "ratio", "dt", "drive_clamp",
              "jmin_start", "jmin_stop")
    for section, keys in _SECTIONS.items():
        for key in keys:
            if key == "experiment" or not cp.has_option(section, key):
                continue
            raw = cp.get(section, key)
            try:
                if key in floats:
                    kwargs[key] = float(raw)
                elif key == "jmin_count":
                    kwargs[key] = int(raw)
                elif key == "periods":
                    kwargs[key] = tuple(float(v) for v in raw.split(","))
                elif key == "cd_mode":
                    if raw not in _CD_ALIASES:
                        raise ValueError(f"choose from {sorted(_CD_ALIASES)}")
                    kwargs[key] = _CD_ALIASES[raw]
                else:
                    kwargs[key] = raw
            except ValueError as exc:
                raise ConfigError(f"invalid value for {section}.{key}: {raw!r} ({exc})") from exc
    return default_config(experiment, **kwargs)


def load_config(path, overrides: dict | None = None) -> ExperimentConfig:
    """Config from an INI file (or experiment defaults) plus flag overrides."""
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config file {path}: {exc}") from exc
        config = config_from_ini(text)
    else:
        if not overrides or overrides.get("experiment") is None:
            raise ConfigError("either a config file or --experiment is required")
        config = default_config(parse_experiment(overrides["experiment"]))
    if overrides:
        clean = {k: v for k, v in overrides.items() if v is not None and k != "experiment"}
        if "cd_mode" in clean and isinstance(clean["cd_mode"], str):
            if clean["cd_mode"] not in _CD_ALIASES:
                raise ConfigError(f"invalid run.cd_mode {clean['cd_mode']!r}; choose from {sorted(_CD_ALIASES)}")
            clean["cd_mode"] = _CD_ALIASES[clean["cd_mode"]]
        valid = {f.name for f in fields(ExperimentConfig)}
        unknown = set(clean) - valid
        if unknown:
            raise ConfigError(f"unknown config overrides: {sorted(unknown)}")
        config = replace(config, **clean)
    return config.validate()


# -- deterministic writers ---------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return f"{value:.17g}"
    return str(value)


def _write_table(path: Path, header: str, rows) -> Path:
    with open(path, "w") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return path


def _write_json(path: Path, payload) -> Path:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _write_drive_csv(path: Path, drive) -> Path:
    rows = zip(drive.times, drive.j_cd.real, drive.j_cd.imag, drive.delta_cd)
    return _write_table(path, "t,ReJcd,ImJcd,deltaCD", rows)


def _ensure_outdir(config: ExperimentConfig) -> Path:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _max_a(schedule: ControlSchedule) -> float:
    """max over t of a_+- for a |R-> initialization."""
    return adiabaticity_parameter(tracked_angle(schedule), pair=("+", "-")).max_a


# -- runners -----------------------------------------------------------------

def run_encircle(config: ExperimentConfig) -> list[Path]:
    """(CW, CCW) x (none, hermitian, full) loops from |R->: trajectories, drives, summaries."""
    out = _ensure_outdir(config)
    written = []
    for direction in ("cw", "ccw"):
        schedule = config.schedule(direction)
        path = tracked_angle(schedule)
        written.append(_write_drive_csv(out / f"encircle_drive_{direction}.csv", cd_exact(path)))
        max_a = _max_a(schedule)
        for mode in (CDMode.NONE, CDMode.HERMITIAN_ONLY, CDMode.FULL):
            traj = evolve_with_cd(
                schedule, cd_mode=mode, initial="R-",
                dt=config.dt, drive_clamp=config.drive_clamp,
            )
            tag = f"{direction}_{_CD_NAMES[mode]}"
            p = out / f"encircle_{tag}.csv"
            traj.write_csv(p)
            written.append(p)
            summary = summarize_loop(traj, schedule, max_a=max_a)
            written.append(_write_json(out / f"encircle_{tag}_summary.json", summary.as_json()))
    return written


def _period_sweep_row(config: ExperimentConfig, T: float, direction: str, mode: CDMode, max_a: float):
    schedule = config.schedule(direction, period=T)
    traj = evolve_with_cd(
        schedule, cd_mode=mode, initial="R-",
        dt=config.dt, drive_clamp=config.drive_clamp,
    )
    summary = summarize_loop(traj, schedule, max_a=max_a)
    return (T, direction, _CD_NAMES[mode], summary.avg_trace_distance, max_a)


def run_period_sweep(config: ExperimentConfig) -> list[Path]:
    """D-bar and max[a_nm] versus loop period for both directions and all CD modes."""
    out = _ensure_outdir(config)
    periods = config.periods if config.periods is not None else _SWEEP_PERIODS
    pairs = [(float(T), d) for T in periods for d in ("cw", "ccw")]
    with ThreadPoolExecutor(max_workers=min(8, os.cpu_count() or 1)) as pool:
        max_as = list(pool.map(lambda p: _max_a(config.schedule(p[1], period=p[0])), pairs))
        tasks = [
            (T, d, mode, ma)
            for (T, d), ma in zip(pairs, max_as)
            for mode in (CDMode.NONE, CDMode.HERMITIAN_ONLY, CDMode.FULL)
        ]
        rows = list(pool.map(lambda a: _period_sweep_row(config, *a), tasks))
    return [_write_table(out / "period_sweep.csv", "T,direction,cdMode,Dbar,maxA", rows)]


def _topology_row(config: ExperimentConfig, j_min: float):
    from .paths import enclosed_ep_count
    from .propagator import DEFAULT_STEPS, STEP_GUARD

    schedule = config.schedule(j_min=j_min)
    probe = tracked_angle(schedule, n_samples=DEFAULT_STEPS + 1)
    dt = config.dt
    if dt is None:
        # The CD drive peaks sharply when the loop skirts an EP (j_min near
        # +/- kappa); choose dt so dt * max||H|| stays at half the step guard.
        h_cd = math.sqrt(2.0) * float(np.max(np.abs(probe.alpha_dot))) / 2.0
        h_eff = float(np.max(np.sqrt(4.0 * np.abs(probe.energy) ** 2 + 2.0 * probe.amp**2)))
        n = max(DEFAULT_STEPS, int(math.ceil(schedule.period * (h_cd + h_eff) / (0.5 * STEP_GUARD))))
        dt = schedule.period / n
    cd_kwargs = dict(initial=X_MINUS, dt=dt, drive_clamp=config.drive_clamp)
    x_cd = float(evolve_with_cd(schedule, cd_mode=config.cd_mode, **cd_kwargs).pauli[-1, 0])
    x_nocd = float(evolve_with_cd(schedule, cd_mode=CDMode.NONE, **cd_kwargs).pauli[-1, 0])
    return (j_min, x_cd, x_nocd, enclosed_ep_count(probe))


def run_topology_scan(config: ExperimentConfig) -> list[Path]:
    """x(T) from |x-> with and without CD while j_min sweeps across the EPs at +/- kappa."""
    out = _ensure_outdir(config)
    start = config.jmin_start if config.jmin_start is not None else -1.0
    stop = config.jmin_stop if config.jmin_stop is not None else 1.0
    count = config.jmin_count if config.jmin_count is not None else 41
    j_mins = [float(v) for v in np.linspace(start, stop, count)]
    mode = config.cd_mode if config.cd_mode is not CDMode.NONE else CDMode.FULL
    scan_config = replace(config, cd_mode=mode)
    with ThreadPoolExecutor(max_workers=min(8, os.cpu_count() or 1)) as pool:
        rows = list(pool.map(lambda j: _topology_row(scan_config, j), j_mins))
    return [_write_table(out / "topology_scan.csv", "jMin,xT_cd,xT_nocd,enclosedEPs", rows)]


def run_apollonius_deviation(config: ExperimentConfig) -> list[Path]:
    """Hermitian-only CD on an Apollonius circle versus a deviating ellipse.

    The circle has constant alpha_I, so dropping the anti-Hermitian drive part
    costs nothing; the ellipse shows a mid-loop trace-distance peak that full
    CD removes.
    """
    out = _ensure_outdir(config)
    ratio = config.ratio if config.ratio is not None else 0.9733
    _, circle_schedule = apollonius_from_ratio(
        ratio, config.kappa, period=config.period, direction=config.direction
    )
    ellipse_schedule = config.schedule()

    written = []
    summaries = {}
    for name, schedule in (("circle", circle_schedule), ("ellipse", ellipse_schedule)):
        path = tracked_angle(schedule)
        written.append(_write_drive_csv(out / f"apollonius_drive_{name}.csv", cd_exact(path)))
        for mode in (CDMode.HERMITIAN_ONLY, CDMode.FULL):
            traj = evolve_with_cd(
                schedule, cd_mode=mode, initial="R-",
                dt=config.dt, drive_clamp=config.drive_clamp,
            )
            tag = f"{name}_{_CD_NAMES[mode]}"
            p = out / f"apollonius_{tag}.csv"
            traj.write_csv(p)
            written.append(p)
            summaries[tag] = summarize_loop(traj, schedule).as_json()
    written.append(_write_json(out / "apollonius_summary.json", summaries))
    return written


def run_adiabaticity_sweep(config: ExperimentConfig) -> list[Path]:
    """a_nm(t) traces at the configured period plus max[a_nm] over (T, direction)."""
    out = _ensure_outdir(config)
    written = []
    for direction in ("cw", "ccw"):
        path = tracked_angle(config.schedule(direction))
        rep_pm = adiabaticity_parameter(path, pair=("+", "-"))
        rep_mp = adiabaticity_parameter(path, pair=("-", "+"))
        rows = zip(path.times, rep_pm.a_values, rep_mp.a_values, rep_pm.i_exponent)
        written.append(
            _write_table(out / f"adiabaticity_{direction}.csv", "t,a_pm,a_mp,I_pm", rows)
        )
    periods = config.periods if config.periods is not None else _SWEEP_PERIODS
    pairs = [(float(T), d) for T in periods for d in ("cw", "ccw")]
    with ThreadPoolExecutor(max_workers=min(8, os.cpu_count() or 1)) as pool:
        max_as = list(pool.map(lambda p: _max_a(config.schedule(p[1], period=p[0])), pairs))
    rows = [(T, d, ma) for (T, d), ma in zip(pairs, max_as)]
    written.append(_write_table(out / "adiabaticity_sweep.csv", "T,direction,maxA", rows))
    return written


_RUNNERS = {
    Experiment.ENCIRCLE: run_encircle,
    Experiment.PERIOD_SWEEP: run_period_sweep,
    Experiment.TOPOLOGY_SCAN: run_topology_scan,
    Experiment.APOLLONIUS_DEVIATION: run_apollonius_deviation,
    Experiment.ADIABATICITY_SWEEP: run_adiabaticity_sweep,
}


def run_experiment(config: ExperimentConfig) -> list[Path]:
    return _RUNNERS[config.experiment](config)
