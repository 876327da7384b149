"""Small fixed-size linear algebra on SO(3) and its Lie algebra.

Everything here is pure and stateless: plain ``numpy`` arrays in, plain
arrays out. Rotation matrices are 3x3 ``float64`` arrays satisfying
``R.T @ R = I`` and ``det(R) = +1``; tangent vectors are length-3 arrays.
"""

from __future__ import annotations

import math
import warnings
from typing import NamedTuple

import numpy as np

ROTATION_TOL = 1e-9
VEX_TOL = 1e-9
SMALL_ANGLE = 1e-8
GIMBAL_TOL = 1e-6

I3 = np.eye(3)


class GimbalLockWarning(UserWarning):
    """Pitch within tolerance of +/- pi/2; roll/yaw split is degenerate."""


class AxisAngle(NamedTuple):
    """Unit rotation axis and angle in radians."""

    axis: np.ndarray
    angle: float


def hat(u) -> np.ndarray:
    """Map a 3-vector to its antisymmetric cross-product matrix."""
    u0, u1, u2 = u
    return np.array([[0.0, -u2, u1], [u2, 0.0, -u0], [-u1, u0, 0.0]])


def cross3(a, b) -> np.ndarray:
    """Cross product of two 3-vectors (faster than ``np.cross`` on scalars)."""
    a0, a1, a2 = a
    b0, b1, b2 = b
    return np.array([a1 * b2 - a2 * b1, a2 * b0 - a0 * b2, a0 * b1 - a1 * b0])


def vex(M) -> np.ndarray:
    """Inverse of :func:`hat`. Rejects matrices that are not antisymmetric.

    The symmetric part of ``M`` must vanish within ``VEX_TOL``; callers
    unsure of their input should project with :func:`pa` first.
    """
    M = np.asarray(M, dtype=float)
    sym = M + M.T
    if np.max(np.abs(sym)) > VEX_TOL:
        raise ValueError(
            f"vex: input is not antisymmetric (symmetric part max "
            f"{np.max(np.abs(sym)):.3e} exceeds {VEX_TOL:.0e})"
        )
    return np.array([M[2, 1], M[0, 2], M[1, 0]])


def pa(A) -> np.ndarray:
    """Antisymmetric projection (A - A^T) / 2."""
    A = np.asarray(A, dtype=float)
    return 0.5 * (A - A.T)


def upsilon(A) -> np.ndarray:
    """vex of the antisymmetric projection of a 3x3 matrix."""
    return 0.5 * np.array([A[2][1] - A[1][2], A[0][2] - A[2][0], A[1][0] - A[0][1]])


def ecl_dist(R) -> float:
    """Normalized attitude distance ``Tr(I - R) / 4`` in [0, 1]."""
    return 0.25 * (3.0 - (R[0][0] + R[1][1] + R[2][2]))


def mbar(M) -> np.ndarray:
    """``Tr(M) I - M`` for symmetric M."""
    M = np.asarray(M, dtype=float)
    return np.trace(M) * I3 - M


def axis_angle(v) -> AxisAngle:
    """Split a rotation vector into unit axis and angle.

    Below ``SMALL_ANGLE`` the axis is ill-defined; a fixed z axis is
    returned so downstream code never divides by zero.
    """
    v = np.asarray(v, dtype=float)
    angle = float(np.linalg.norm(v))
    if angle < SMALL_ANGLE:
        return AxisAngle(np.array([0.0, 0.0, 1.0]), angle)
    return AxisAngle(v / angle, angle)


def exp_so3(w, dt: float = 1.0) -> np.ndarray:
    """Rotation matrix advancing attitude by rate ``w`` over ``dt`` seconds.

    Rodrigues form ``I + sin(b) [u]x + (1 - cos(b)) [u]x^2`` with
    ``b = ||w dt||``; for ``b`` below ``SMALL_ANGLE`` the second-order
    Taylor form ``I + [eta]x + [eta]x^2 / 2`` is used instead.
    """
    e0, e1, e2 = w[0] * dt, w[1] * dt, w[2] * dt
    beta = math.sqrt(e0 * e0 + e1 * e1 + e2 * e2)
    K = np.array([[0.0, -e2, e1], [e2, 0.0, -e0], [-e1, e0, 0.0]])
    if beta < SMALL_ANGLE:
        return I3 + K + 0.5 * (K @ K)
    a = math.sin(beta) / beta
    b = (1.0 - math.cos(beta)) / (beta * beta)
    return I3 + a * K + b * (K @ K)


def is_rotation(R, tol: float = ROTATION_TOL) -> bool:
    """True when ``R.T R = I`` and ``det(R) = +1`` within ``tol``."""
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3) or not np.all(np.isfinite(R)):
        return False
    if np.max(np.abs(R.T @ R - I3)) > tol:
        return False
    return abs(np.linalg.det(R) - 1.0) <= tol


def check_rotation(R, tol: float = ROTATION_TOL, name: str = "R") -> np.ndarray:
    """Validate and return ``R`` as a float array; raise ``ValueError`` otherwise."""
    R = np.asarray(R, dtype=float)
    if not is_rotation(R, tol):
        raise ValueError(f"{name} is not a rotation matrix within {tol:.0e}")
    return R


def project_rotation(A) -> np.ndarray:
    """Nearest rotation matrix (Frobenius) via polar decomposition."""
    U, _, Vt = np.linalg.svd(np.asarray(A, dtype=float))
    D = np.diag([1.0, 1.0, np.sign(np.linalg.det(U @ Vt))])
    return U @ D @ Vt


def euler_zyx(R, warn: bool = True) -> tuple[float, float, float]:
    """Extract ZYX (roll, pitch, yaw) angles from a rotation matrix.

    ``R = Rz(yaw) Ry(pitch) Rx(roll)``. Near pitch = +/- pi/2 the roll/yaw
    split is degenerate; a :class:`GimbalLockWarning` is emitted (when
    ``warn``) and a consistent triple with roll = 0 is returned.
    """
    sp = -R[2][0]
    sp = 1.0 if sp > 1.0 else (-1.0 if sp < -1.0 else sp)
    pitch = math.asin(sp)
    if abs(abs(pitch) - 0.5 * math.pi) < GIMBAL_TOL:
        if warn:
            warnings.warn(
                "pitch at gimbal lock; returning roll = 0", GimbalLockWarning, stacklevel=2
            )
        # Only roll -/+ yaw is observable; fold everything into yaw.
        if pitch > 0.0:
            return 0.0, pitch, math.atan2(R[1][2], R[1][1])
        return 0.0, pitch, math.atan2(-R[1][2], R[1][1])
    roll = math.atan2(R[2][1], R[2][2])
    yaw = math.atan2(R[1][0], R[0][0])
    return roll, pitch, yaw


def rot_zyx(roll: float, pitch: float, yaw: float) -> np.ndarray:
    """Compose ``Rz(yaw) Ry(pitch) Rx(roll)``; inverse of :func:`euler_zyx`."""
    cr, sr = math.cos(roll), math.sin(roll)
    cp, sp = math.cos(pitch), math.sin(pitch)
    cy, sy = math.cos(yaw), math.sin(yaw)
    return np.array(
        [
            [cy * cp, cy * sp * sr - sy * cr, cy * sp * cr + sy * sr],
            [sy * cp, sy * sp * sr + cy * cr, sy * sp * cr - cy * sr],
            [-sp, cp * sr, cp * cr],
        ]
    )
