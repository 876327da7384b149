"""Filter-coupled attitude tracking controller with disturbance adaptation.

The torque law only ever sees measurements and filter estimates; the
true gyro bias and the true disturbance never cross this interface. The
attitude innovation can be driven either by the measured body vectors
(continuous-law form) or by the filter-predicted ones (discrete
algorithm form, the default).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rigid_body import DesiredState, validate_refs
from .so3 import cross3

INNOVATION_SOURCES = ("measured", "estimated")
DHAT_SIGNS = ("sectionV", "algorithm1")


@dataclass
class ControlGains:
    """Positive scalar gains of the tracking law."""

    k_c1: float = 10.0
    k_c2: float = 2.0
    k_d: float = 10.0
    gamma_d: float = 0.01

    def __post_init__(self):
        if min(self.k_c1, self.k_c2, self.k_d, self.gamma_d) <= 0.0:
            raise ValueError("control gains must be positive")


@dataclass
class ControllerState:
    """Adapted disturbance-torque estimate (N m)."""

    d_hat: np.ndarray


def control_innovation(vecs, refs, R_d) -> np.ndarray:
    """Tracking-error innovation ``sum_i s_i (R_d v_i) x r_i``.

    With exact body vectors ``v_i`` this is twice the vex of the
    antisymmetric part of the weighted tracking error ``M_r R R_d^T``
    (the cross products carry no one-half factor here, matching the
    discrete algorithm; the dual matrix route differs by exactly 2).
    """
    validate_refs(refs)
    ups = np.zeros(3)
    for vi, (r, s) in zip(vecs, refs):
        ups += s * cross3(R_d @ vi, r)
    return ups


def torque(
    cs: ControllerState,
    Omega_m,
    W_b_hat,
    ds: DesiredState,
    ups_c,
    J: np.ndarray,
    g: ControlGains,
) -> tuple[np.ndarray, np.ndarray]:
    """Control torque and its feedback part.

    ``T = J dOmega_d - [J (Omega_m - W_b_hat)]x Omega_d - d_hat - w_c``
    with ``w_c = k_c1 R_d^T ups_c + k_c2 (Omega_m - W_b_hat - Omega_d)``.
    Returns ``(T, w_c)``.
    """
    rate = Omega_m - W_b_hat
    w_c = g.k_c1 * (ds.R_d.T @ ups_c) + g.k_c2 * (rate - ds.Omega_d)
    T = J @ ds.Omega_d_dot - cross3(J @ rate, ds.Omega_d) - cs.d_hat - w_c
    return T, w_c


def disturbance_update(
    cs: ControllerState,
    Omega_m,
    W_b_hat,
    Omega_d,
    g: ControlGains,
    dt: float,
    sign: str = "sectionV",
) -> ControllerState:
    """Advance the disturbance estimate one explicit Euler step.

    Default (continuous-law) form:
    ``d_hat += dt ((k_d / k_c1) (Omega_m - W_b_hat - Omega_d) - gamma_d k_d d_hat)``.
    ``sign = "algorithm1"`` negates the rate-error term, matching the
    discrete pseudocode instead.
    """
    e = Omega_m - W_b_hat - Omega_d
    if sign == "algorithm1":
        e = -e
    elif sign != "sectionV":
        raise ValueError(f"unknown d_hat sign convention {sign!r}")
    d_hat = cs.d_hat + dt * ((g.k_d / g.k_c1) * e - g.gamma_d * g.k_d * cs.d_hat)
    return ControllerState(d_hat)


def controller_step(
    cs: ControllerState,
    Omega_m,
    W_b_hat,
    ds: DesiredState,
    vecs,
    refs,
    J: np.ndarray,
    g: ControlGains,
    dt: float,
    dhat_sign: str = "sectionV",
) -> tuple[ControllerState, np.ndarray, np.ndarray, np.ndarray]:
    """One controller tick: innovation, disturbance update, then torque.

    ``vecs`` is the configured vector source (measured y_i or predicted
    yhat_i) for the attitude innovation. The torque uses the just-updated
    disturbance estimate. Returns ``(state, T, w_c, ups_c)``.
    """
    ups_c = control_innovation(vecs, refs, ds.R_d)
    cs = disturbance_update(cs, Omega_m, W_b_hat, ds.Omega_d, g, dt, sign=dhat_sign)
    T, w_c = torque(cs, Omega_m, W_b_hat, ds, ups_c, J, g)
    return cs, T, w_c, ups_c
