"""Closed-loop orchestration: configuration, simulation runs, statistics, I/O.

A run is a deterministic state machine: measurements are taken at the
start of tick k, the filter and controller consume them together with
the tick-k desired state, and the resulting torque is held over the
following sample interval while truth and desired advance. Every random
draw comes from per-source substreams spawned from the run seed, so a
(config, seed) pair fully determines every output byte.
"""

from __future__ import annotations

import dataclasses
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import so3
from .controller import DHAT_SIGNS, INNOVATION_SOURCES, ControlGains, ControllerState, controller_step
from .nn_filter import FilterGains, FilterState, filter_step, make_filter_gains, make_filter_state
from .quat import quat_from_rot, rot_from_quat
from .rigid_body import (
    BodyState,
    DesiredState,
    InertiaParams,
    MeasurementRng,
    ReferenceSensor,
    SensorParams,
    desired_rate_dot,
    desired_step,
    measure,
    truth_step,
)

# Benchmark initial truth attitude; printed to four decimals, so it is
# projected onto SO(3) at config resolution.
R0_DEFAULT = [
    [-0.7060, 0.0956, 0.7018],
    [0.1274, -0.9576, 0.2585],
    [0.6967, 0.2719, 0.6638],
]

IDENTITY3 = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]

# Vector-sensor noise N(0, 0.05) is read as variance 0.05 (std ~ 0.224);
# the gyro noise level is separately stated as a standard deviation.
VECTOR_NOISE_STD = math.sqrt(0.05)

DEFAULT_SENSORS = [
    {"r": [0.5773502691896258, 0.5773502691896258, -0.5773502691896258],
     "b": [0.01, 0.005, -0.04], "noise_std": VECTOR_NOISE_STD, "s": 1.0},
    {"r": [0.0, 0.0, 1.0],
     "b": [0.025, -0.03, 0.02], "noise_std": VECTOR_NOISE_STD, "s": 1.0},
]

_SENSOR_KEYS = {"r", "b", "noise_std", "s"}

CSV_COLUMNS = (
    "t",
    "phi", "theta", "psi",
    "phi_hat", "theta_hat", "psi_hat",
    "phi_d", "theta_d", "psi_d",
    "Ro_dist", "Rc_dist", "omega_err", "dist_err",
    "wb_norm", "wsigma_fro",
    "tau_x", "tau_y", "tau_z",
)

CSV_HEADER = ",".join(CSV_COLUMNS)

BACKENDS = ("matrix", "quaternion")


@dataclass
class SimConfig:
    """Full run description; field names mirror the JSON config schema."""

    dt: float = 0.01
    duration: float = 50.0
    neurons: int = 3
    seed: int = 0
    backend: str = "matrix"
    noise_free: bool = False
    innovation_source: str = "estimated"
    dhat_sign: str = "sectionV"
    truth_substeps: int = 1
    # filter gains
    k_ob: float = 1.0
    k_osigma: float = 1.0
    gamma_b: float = 1.0
    # control gains
    k_c1: float = 10.0
    k_c2: float = 2.0
    k_d: float = 10.0
    gamma_d: float = 0.01
    # sensor corruption
    gyro_noise_std: float = 0.05
    W_b: list = field(default_factory=lambda: [0.03, 0.015, 0.021])
    sensors: list = field(default_factory=lambda: [dict(s) for s in DEFAULT_SENSORS])
    # body and disturbance
    J: list = field(default_factory=lambda: [0.016, 0.015, 0.03])
    d: list = field(default_factory=lambda: [0.1, 0.3, 0.2])
    # initial conditions
    R0: list = field(default_factory=lambda: [row[:] for row in R0_DEFAULT])
    Omega0: list = field(default_factory=lambda: [0.2, 0.3, 0.3])
    Rd0: list = field(default_factory=lambda: [row[:] for row in IDENTITY3])
    Rhat0: list = field(default_factory=lambda: [row[:] for row in IDENTITY3])
    Omega_d0: list = field(default_factory=lambda: [0.0, 0.0, 0.0])

    def __post_init__(self):
        self.backend = normalize_backend(self.backend)
        self.validate()

    def validate(self) -> None:
        if self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.duration < self.dt:
            raise ValueError("duration must be at least one sample interval")
        if self.neurons < 1:
            raise ValueError("neurons must be a positive integer")
        if self.truth_substeps < 1:
            raise ValueError("truth_substeps must be a positive integer")
        if self.backend not in BACKENDS:
            raise ValueError(f"backend must be one of {BACKENDS}")
        if self.innovation_source not in INNOVATION_SOURCES:
            raise ValueError(f"innovation_source must be one of {INNOVATION_SOURCES}")
        if self.dhat_sign not in DHAT_SIGNS:
            raise ValueError(f"dhat_sign must be one of {DHAT_SIGNS}")
        for g in ("k_ob", "k_osigma", "gamma_b", "k_c1", "k_c2", "k_d", "gamma_d"):
            if getattr(self, g) <= 0.0:
                raise ValueError(f"{g} must be positive")
        # Discrete decay stability of the leaky adaptation laws.
        if self.dt * self.gamma_d * self.k_d >= 1.0:
            raise ValueError("dt * gamma_d * k_d must be below 1")
        if self.dt * self.gamma_b * self.k_ob >= 1.0:
            raise ValueError("dt * gamma_b * k_ob must be below 1")
        for entry in self.sensors:
            if not isinstance(entry, dict):
                raise ValueError("each sensor must be an object")
            unknown = set(entry) - _SENSOR_KEYS
            if unknown:
                raise ValueError(f"unknown sensor keys: {sorted(unknown)}")
            if "r" not in entry:
                raise ValueError("sensor entry missing reference direction 'r'")
        for name in ("R0", "Rd0", "Rhat0"):
            _resolve_rotation(getattr(self, name), name)

    @classmethod
    def from_dict(cls, data: dict) -> "SimConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    @classmethod
    def from_json(cls, path) -> "SimConfig":
        with open(path) as fh:
            data = json.load(fh)
        if not isinstance(data, dict):
            raise ValueError("config file must contain a JSON object")
        return cls.from_dict(data)

    def replace(self, **kw) -> "SimConfig":
        return dataclasses.replace(self, **kw)

    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))


def normalize_backend(name: str) -> str:
    return {"quat": "quaternion"}.get(name, name)


def _as_matrix3(value, name: str) -> np.ndarray:
    M = np.asarray(value, dtype=float)
    if M.shape == (3,):
        return np.diag(M)
    if M.shape != (3, 3):
        raise ValueError(f"{name} must be a 3-vector of diagonal entries or a 3x3 matrix")
    return M


def _resolve_rotation(value, name: str) -> np.ndarray:
    """Accept a slightly denormalized matrix (e.g. printed to 4 decimals)."""
    R = np.asarray(value, dtype=float)
    if R.shape != (3, 3):
        raise ValueError(f"{name} must be 3x3")
    if so3.is_rotation(R):
        return R
    P = so3.project_rotation(R)
    if np.max(np.abs(P - R)) > 1e-3:
        raise ValueError(f"{name} is not within 1e-3 of a rotation matrix")
    return P


@dataclass
class ResolvedRun:
    """Array-form parameters and initial states for one run."""

    inertia: InertiaParams
    sensor_params: SensorParams
    filter_gains: FilterGains
    control_gains: ControlGains
    truth: BodyState
    desired: DesiredState
    fstate: FilterState
    cstate: ControllerState
    rng: MeasurementRng


def resolve(cfg: SimConfig) -> ResolvedRun:
    """Turn a validated config into runtime objects with seeded substreams.

    Substream order is fixed (input weights, gyro, then one per vector
    sensor) so enabling or disabling one noise source never shifts the
    draws of another.
    """
    children = np.random.SeedSequence(cfg.seed).spawn(2 + len(cfg.sensors))
    gen = [np.random.Generator(np.random.Philox(c)) for c in children]
    kups_rng, gyro_rng, sensor_rngs = gen[0], gen[1], gen[2:]

    refs = []
    for entry in cfg.sensors:
        refs.append(
            ReferenceSensor(
                r=entry["r"],
                b=np.zeros(3) if cfg.noise_free else np.asarray(entry.get("b", [0.0] * 3), float),
                noise_std=0.0 if cfg.noise_free else float(entry.get("noise_std", 0.0)),
                s=float(entry.get("s", 1.0)),
            )
        )
    sensor_params = SensorParams(
        W_b=np.zeros(3) if cfg.noise_free else np.asarray(cfg.W_b, float),
        gyro_noise_std=0.0 if cfg.noise_free else cfg.gyro_noise_std,
        refs=refs,
    )
    inertia = InertiaParams(
        J=_as_matrix3(cfg.J, "J"),
        d=np.zeros(3) if cfg.noise_free else np.asarray(cfg.d, float),
    )
    fgains = make_filter_gains(
        q=cfg.neurons,
        k_ob=cfg.k_ob,
        k_osigma=cfg.k_osigma,
        gamma_b=cfg.gamma_b,
        rng=kups_rng,
    )
    cgains = ControlGains(cfg.k_c1, cfg.k_c2, cfg.k_d, cfg.gamma_d)
    truth = BodyState(_resolve_rotation(cfg.R0, "R0"), np.asarray(cfg.Omega0, float))
    desired = DesiredState(
        _resolve_rotation(cfg.Rd0, "Rd0"), np.asarray(cfg.Omega_d0, float), desired_rate_dot(0.0)
    )
    fstate = make_filter_state(cfg.neurons, _resolve_rotation(cfg.Rhat0, "Rhat0"), cfg.backend)
    cstate = ControllerState(np.zeros(3))
    return ResolvedRun(
        inertia=inertia,
        sensor_params=sensor_params,
        filter_gains=fgains,
        control_gains=cgains,
        truth=truth,
        desired=desired,
        fstate=fstate,
        cstate=cstate,
        rng=MeasurementRng(gyro_rng, sensor_rngs),
    )


@dataclass
class RunRecord:
    """Time-series log of one run; column layout given by ``CSV_COLUMNS``."""

    data: np.ndarray
    kups: np.ndarray | None = None  # input-weight draw, kept for reproducibility

    def __len__(self) -> int:
        return self.data.shape[0]

    def column(self, name: str) -> np.ndarray:
        return self.data[:, CSV_COLUMNS.index(name)]

    def to_csv(self, path) -> None:
        export(self, path, "csv")

    @classmethod
    def from_csv(cls, path) -> "RunRecord":
        with open(path) as fh:
            header = fh.readline().rstrip("\n")
            if header != CSV_HEADER:
                raise ValueError(f"unexpected CSV header in {path}")
            rows = [
                [float(tok) for tok in line.rstrip("\n").split(",")]
                for line in fh
                if line.strip()
            ]
        data = np.array(rows, dtype=float).reshape(len(rows), len(CSV_COLUMNS))
        return cls(data)


def _log_row(
    out: np.ndarray,
    t: float,
    truth: BodyState,
    desired: DesiredState,
    R_hat: np.ndarray,
    W_b_hat: np.ndarray,
    W_sigma_hat: np.ndarray,
    d_hat: np.ndarray,
    d_true: np.ndarray,
    T: np.ndarray,
) -> None:
    out[0] = t
    out[1:4] = so3.euler_zyx(truth.R, warn=False)
    out[4:7] = so3.euler_zyx(R_hat, warn=False)
    out[7:10] = so3.euler_zyx(desired.R_d, warn=False)
    out[10] = so3.ecl_dist(truth.R.T @ R_hat)
    out[11] = so3.ecl_dist(truth.R @ desired.R_d.T)
    w = truth.Omega - desired.Omega_d
    out[12] = math.sqrt(w @ w)
    e = d_true - d_hat
    out[13] = math.sqrt(e @ e)
    out[14] = math.sqrt(W_b_hat @ W_b_hat)
    out[15] = math.sqrt(np.sum(W_sigma_hat * W_sigma_hat))
    out[16:19] = T


def run_simulation(cfg: SimConfig) -> RunRecord:
    """Execute one closed-loop run and return its per-tick log.

    Row k holds the states at time k dt before tick-k processing,
    together with the torque computed at tick k and held over the next
    interval; the final row repeats the last torque.
    """
    run = resolve(cfg)
    n = cfg.n_steps()
    dt = cfg.dt
    data = np.empty((n + 1, len(CSV_COLUMNS)))
    refs = [(ref.r, ref.s) for ref in run.sensor_params.refs]
    ref_dirs = [r for r, _ in refs]
    quaternion = cfg.backend == "quaternion"
    measured_source = cfg.innovation_source == "measured"

    truth, desired, fstate, cstate = run.truth, run.desired, run.fstate, run.cstate
    T = np.zeros(3)
    for k in range(n):
        t = k * dt
        try:
            frame = measure(truth, run.sensor_params, run.rng)
            R_hat_pre = fstate.R_hat
            pre_fstate = fstate
            pre_d_hat = cstate.d_hat
            fstate, _ = filter_step(fstate, frame, refs, run.filter_gains, dt)
            if measured_source:
                vecs = frame.y
            else:
                vecs = [R_hat_pre.T @ r for r in ref_dirs]
            if quaternion:
                ds_ctrl = DesiredState(
                    rot_from_quat(quat_from_rot(desired.R_d)), desired.Omega_d, desired.Omega_d_dot
                )
            else:
                ds_ctrl = desired
            cstate, T, _, _ = controller_step(
                cstate,
                frame.Omega_m,
                fstate.W_b_hat,
                ds_ctrl,
                vecs,
                refs,
                run.inertia.J,
                run.control_gains,
                dt,
                dhat_sign=cfg.dhat_sign,
            )
            if not (math.isfinite(T[0]) and math.isfinite(T[1]) and math.isfinite(T[2])):
                raise ArithmeticError("torque is not finite")
            _log_row(
                data[k], t, truth, desired, R_hat_pre,
                pre_fstate.W_b_hat, pre_fstate.W_sigma_hat,
                pre_d_hat, run.inertia.d, T,
            )
            desired = desired_step(desired, t, dt)
            truth = truth_step(truth, T, run.inertia, dt, cfg.truth_substeps)
        except (ValueError, ArithmeticError) as exc:
            raise type(exc)(f"tick {k}: {exc}") from exc
    _log_row(
        data[n], n * dt, truth, desired, fstate.R_hat,
        fstate.W_b_hat, fstate.W_sigma_hat, cstate.d_hat, run.inertia.d, T,
    )
    return RunRecord(data, kups=run.filter_gains.K_ups)


@dataclass
class SummaryStats:
    """Windowed mean and population standard deviation of the estimation distance."""

    t_start: float
    t_end: float
    mean: float
    std: float
    n_samples: int
    seed: int | None = None

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


def steady_state_stats(
    rec: RunRecord, t_start: float = 4.0, t_end: float = 50.0, seed: int | None = None
) -> SummaryStats:
    """Statistics of the ``Ro_dist`` column over ``[t_start, t_end]`` inclusive."""
    t = rec.column("t")
    mask = (t >= t_start - 1e-12) & (t <= t_end + 1e-12)
    vals = rec.column("Ro_dist")[mask]
    if vals.size == 0:
        raise ValueError("statistics window contains no samples")
    return SummaryStats(
        t_start=t_start,
        t_end=t_end,
        mean=float(np.mean(vals)),
        std=float(np.std(vals)),
        n_samples=int(vals.size),
        seed=seed,
    )


@dataclass
class MonteCarloResult:
    """Per-seed statistics (sorted by seed), their pooled aggregate, and failures.

    ``pooled`` is None when every run failed.
    """

    per_seed: list
    pooled: SummaryStats | None
    failures: list

    def to_dict(self) -> dict:
        return {
            "per_seed": [s.to_dict() for s in self.per_seed],
            "pooled": self.pooled.to_dict() if self.pooled is not None else None,
            "failures": [{"seed": s, "error": m} for s, m in self.failures],
        }


def pool_stats(stats: list[SummaryStats]) -> SummaryStats:
    """Aggregate windowed statistics as if all samples were concatenated.

    Reduction runs in seed order regardless of input order, so the
    result is independent of execution order.
    """
    if not stats:
        raise ValueError("no successful runs to pool")
    stats = sorted(stats, key=lambda s: (s.seed is None, s.seed))
    total = sum(s.n_samples for s in stats)
    mean = sum(s.mean * s.n_samples for s in stats) / total
    second = sum((s.std * s.std + s.mean * s.mean) * s.n_samples for s in stats) / total
    var = max(second - mean * mean, 0.0)
    return SummaryStats(
        t_start=stats[0].t_start,
        t_end=stats[0].t_end,
        mean=mean,
        std=math.sqrt(var),
        n_samples=total,
        seed=None,
    )


def monte_carlo(
    cfg: SimConfig, seeds, t_start: float = 4.0, t_end: float = 50.0
) -> MonteCarloResult:
    """Independent runs over ``seeds``; per-run errors are collected, not raised."""
    if len(seeds) == 0:
        raise ValueError("at least one seed is required")
    per_seed = []
    failures = []
    for seed in seeds:
        try:
            rec = run_simulation(cfg.replace(seed=int(seed)))
            per_seed.append(steady_state_stats(rec, t_start, t_end, seed=int(seed)))
        except (ValueError, ArithmeticError) as exc:
            failures.append((int(seed), str(exc)))
    per_seed.sort(key=lambda s: s.seed)
    failures.sort(key=lambda f: f[0])
    pooled = pool_stats(per_seed) if per_seed else None
    return MonteCarloResult(per_seed, pooled, failures)


def _fmt(x) -> str:
    return repr(float(x))


def export(obj, path, fmt: str = "csv") -> None:
    """Write a record or statistics object to ``path`` as CSV or JSON.

    CSV uses the fixed header, ``.`` radix, ``,`` separators, LF line
    ends, and shortest round-trip float formatting.
    """
    path = Path(path)
    if fmt == "csv":
        if not isinstance(obj, RunRecord):
            raise ValueError("CSV export is defined for run records only")
        lines = [CSV_HEADER]
        lines.extend(",".join(_fmt(v) for v in row) for row in obj.data)
        path.write_text("\n".join(lines) + "\n")
    elif fmt == "json":
        if isinstance(obj, RunRecord):
            payload = {name: [float(v) for v in obj.column(name)] for name in CSV_COLUMNS}
        elif isinstance(obj, (SummaryStats, MonteCarloResult)):
            payload = obj.to_dict()
        else:
            raise ValueError(f"cannot export object of type {type(obj).__name__}")
        path.write_text(json.dumps(payload, indent=2) + "\n")
    else:
        raise ValueError("format must be 'csv' or 'json'")
