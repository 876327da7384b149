"""Ground-truth rigid-body dynamics, desired trajectory, and sensor synthesis.

The truth integrator is semi-implicit geometric Euler: the angular
velocity is updated first from the Euler equation, the attitude then
advances along the group exponential of the pre-update rate, so the
attitude never leaves SO(3). The desired trajectory uses the same
convention so that a perfectly tracking loop stays locked to it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .so3 import check_rotation, cross3, exp_so3


@dataclass
class InertiaParams:
    """Body inertia matrix (kg m^2) and constant body-frame disturbance torque (N m)."""

    J: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        self.J = np.asarray(self.J, dtype=float)
        self.d = np.asarray(self.d, dtype=float)
        if self.J.shape != (3, 3) or np.max(np.abs(self.J - self.J.T)) > 1e-12:
            raise ValueError("inertia matrix must be symmetric 3x3")
        if np.min(np.linalg.eigvalsh(self.J)) <= 0.0:
            raise ValueError("inertia matrix must be positive definite")
        self.J_inv = np.linalg.inv(self.J)


@dataclass
class BodyState:
    """True attitude and body-frame angular velocity."""

    R: np.ndarray
    Omega: np.ndarray


@dataclass
class DesiredState:
    """Desired attitude, angular velocity, and angular acceleration."""

    R_d: np.ndarray
    Omega_d: np.ndarray
    Omega_d_dot: np.ndarray


@dataclass
class ReferenceSensor:
    """One vector observation: inertial direction, body bias, noise level, confidence."""

    r: np.ndarray
    b: np.ndarray = field(default_factory=lambda: np.zeros(3))
    noise_std: float = 0.0
    s: float = 1.0

    def __post_init__(self):
        self.r = np.asarray(self.r, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        n = np.linalg.norm(self.r)
        if n < 1e-12:
            raise ValueError("reference direction must be nonzero")
        self.r = self.r / n
        if self.s < 0.0 or self.noise_std < 0.0:
            raise ValueError("sensor confidence and noise std must be nonnegative")


@dataclass
class SensorParams:
    """Gyro corruption model plus the vector-sensor suite."""

    W_b: np.ndarray
    gyro_noise_std: float
    refs: list[ReferenceSensor]

    def __post_init__(self):
        self.W_b = np.asarray(self.W_b, dtype=float)
        if self.gyro_noise_std < 0.0:
            raise ValueError("gyro noise std must be nonnegative")
        validate_refs([(ref.r, ref.s) for ref in self.refs])


@dataclass
class MeasurementFrame:
    """One tick of sensor output: biased/noisy gyro and normalized body vectors."""

    Omega_m: np.ndarray
    y: list[np.ndarray]


@dataclass
class MeasurementRng:
    """Independent Gaussian streams, one for the gyro and one per vector sensor."""

    gyro: np.random.Generator
    sensors: list[np.random.Generator]


def validate_refs(refs) -> None:
    """Require at least two pairwise non-collinear reference directions."""
    if len(refs) < 2:
        raise ValueError("at least two vector observations are required")
    dirs = [np.asarray(r, dtype=float) for r, _ in refs]
    for i in range(len(dirs)):
        for j in range(i + 1, len(dirs)):
            c = cross3(dirs[i], dirs[j])
            if c @ c > 1e-18:
                return
    raise ValueError("reference directions are all collinear")


def desired_rate_dot(t: float) -> np.ndarray:
    """Benchmark desired angular acceleration profile (rad/s^2)."""
    return 0.1 * np.array(
        [
            math.sin(0.15 * t + math.pi / 4.0),
            0.5 * math.sin(0.1 * t + math.pi / 3.0),
            0.8 * math.cos(0.12 * t + math.pi / 2.0),
        ]
    )


def desired_step(ds: DesiredState, t: float, dt: float) -> DesiredState:
    """Advance the desired trajectory one tick.

    The attitude integrates the pre-update rate (same convention as
    :func:`truth_step`), then the rate integrates the acceleration at
    time ``t``; the stored acceleration is refreshed to ``t + dt``.
    """
    R_d = ds.R_d @ exp_so3(ds.Omega_d, dt)
    Omega_d = ds.Omega_d + dt * desired_rate_dot(t)
    return DesiredState(R_d, Omega_d, desired_rate_dot(t + dt))


def truth_step(
    s: BodyState, T: np.ndarray, p: InertiaParams, dt: float, substeps: int = 1
) -> BodyState:
    """Advance the true rigid body under torque ``T`` held over ``dt``.

    ``J dOmega/dt = [J Omega]x Omega + T + d`` with semi-implicit
    geometric Euler; ``substeps`` refines the integration without
    changing the torque.
    """
    h = dt / substeps
    R, Omega = s.R, s.Omega
    J, J_inv, d = p.J, p.J_inv, p.d
    for _ in range(substeps):
        JW = J @ Omega
        Omega_new = Omega + h * (J_inv @ (cross3(JW, Omega) + T + d))
        R = R @ exp_so3(Omega, h)
        Omega = Omega_new
    return BodyState(R, Omega)


def measure(s: BodyState, p: SensorParams, rng: MeasurementRng) -> MeasurementFrame:
    """Synthesize one tick of corrupted measurements from the true state.

    Gyro: ``Omega_m = Omega + W_b + n``. Vector sensors:
    ``y_i = normalize(R^T r_i + b_i + n_i)``. A near-zero raw vector is
    re-drawn once with fresh noise; a second failure raises.
    """
    n = rng.gyro.normal(0.0, p.gyro_noise_std, 3) if p.gyro_noise_std > 0.0 else 0.0
    Omega_m = s.Omega + p.W_b + n
    Rt = s.R.T
    y = []
    for ref, gen in zip(p.refs, rng.sensors):
        base = Rt @ ref.r + ref.b
        for attempt in range(2):
            raw = base + gen.normal(0.0, ref.noise_std, 3) if ref.noise_std > 0.0 else base
            norm = math.sqrt(raw @ raw)
            if norm >= 1e-9:
                break
        else:
            raise ArithmeticError("vector measurement degenerate after noise re-draw")
        y.append(raw / norm)
    return MeasurementFrame(Omega_m, y)


def make_body_state(R, Omega) -> BodyState:
    """Validated constructor for a :class:`BodyState`."""
    return BodyState(check_rotation(R, name="R"), np.asarray(Omega, dtype=float))
