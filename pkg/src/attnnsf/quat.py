"""Unit quaternions on S^3 and the quaternion form of the attitude kinematics.

Quaternions are length-4 arrays ``[q0, qx, qy, qz]`` with scalar part
first, Hamilton product convention, unit norm. ``rot_from_quat`` and the
matrix exponential in :mod:`attnnsf.so3` are exactly compatible:
propagating either representation with the same body rate gives the same
rotation to machine precision.
"""

from __future__ import annotations

import math

import numpy as np

from .so3 import check_rotation, hat

QUAT_NORM_TOL = 1e-6


def _check_unit(Q) -> np.ndarray:
    Q = np.asarray(Q, dtype=float)
    n = np.linalg.norm(Q)
    if abs(n - 1.0) > QUAT_NORM_TOL:
        raise ValueError(f"quaternion norm {n!r} deviates from 1 beyond {QUAT_NORM_TOL:.0e}")
    return Q


def rot_from_quat(Q) -> np.ndarray:
    """Rotation matrix ``(q0^2 - |q|^2) I + 2 q q^T + 2 q0 [q]x``."""
    Q = _check_unit(Q)
    q0, q = Q[0], Q[1:]
    return (q0 * q0 - q @ q) * np.eye(3) + 2.0 * np.outer(q, q) + 2.0 * q0 * hat(q)


def quat_from_rot(R) -> np.ndarray:
    """Unit quaternion of a rotation matrix, canonicalized to ``q0 >= 0``.

    Shepperd's method: branch on the largest of trace and diagonal
    entries so the division is always well conditioned.
    """
    R = check_rotation(R)
    t = R[0, 0] + R[1, 1] + R[2, 2]
    if t >= max(R[0, 0], R[1, 1], R[2, 2]):
        s = math.sqrt(1.0 + t) * 2.0
        Q = np.array(
            [0.25 * s, (R[2, 1] - R[1, 2]) / s, (R[0, 2] - R[2, 0]) / s, (R[1, 0] - R[0, 1]) / s]
        )
    elif R[0, 0] >= max(R[1, 1], R[2, 2]):
        s = math.sqrt(1.0 + R[0, 0] - R[1, 1] - R[2, 2]) * 2.0
        Q = np.array(
            [(R[2, 1] - R[1, 2]) / s, 0.25 * s, (R[0, 1] + R[1, 0]) / s, (R[0, 2] + R[2, 0]) / s]
        )
    elif R[1, 1] >= R[2, 2]:
        s = math.sqrt(1.0 + R[1, 1] - R[0, 0] - R[2, 2]) * 2.0
        Q = np.array(
            [(R[0, 2] - R[2, 0]) / s, (R[0, 1] + R[1, 0]) / s, 0.25 * s, (R[1, 2] + R[2, 1]) / s]
        )
    else:
        s = math.sqrt(1.0 + R[2, 2] - R[0, 0] - R[1, 1]) * 2.0
        Q = np.array(
            [(R[1, 0] - R[0, 1]) / s, (R[0, 2] + R[2, 0]) / s, (R[1, 2] + R[2, 1]) / s, 0.25 * s]
        )
    Q /= np.linalg.norm(Q)
    if Q[0] < 0.0:
        Q = -Q
    return Q


def quat_mul(Q1, Q2) -> np.ndarray:
    """Hamilton product Q1 (x) Q2."""
    a0, a1, a2, a3 = Q1
    b0, b1, b2, b3 = Q2
    return np.array(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ]
    )


def exp_quat(v) -> np.ndarray:
    """Quaternion exponential of a pure-vector argument ``[cos|v|, sin|v| v/|v|]``."""
    v0, v1, v2 = v
    n = math.sqrt(v0 * v0 + v1 * v1 + v2 * v2)
    if n < 1e-12:
        # sin(n)/n -> 1; second-order term keeps the norm exact.
        k = 1.0 - n * n / 6.0
        return np.array([math.cos(n), k * v0, k * v1, k * v2])
    k = math.sin(n) / n
    return np.array([math.cos(n), k * v0, k * v1, k * v2])


def quat_step(Q, h, dt: float) -> np.ndarray:
    """Advance a unit quaternion by constant body rate ``h`` over ``dt``.

    Closed-form solution of ``dQ/dt = Q (x) [0, h] / 2``:
    ``Q <- Q (x) exp_quat(h dt / 2)``. Preserves the norm and matches
    ``R <- R exp_so3(h, dt)`` under :func:`rot_from_quat`.
    """
    return quat_mul(Q, exp_quat((h[0] * dt * 0.5, h[1] * dt * 0.5, h[2] * dt * 0.5)))
