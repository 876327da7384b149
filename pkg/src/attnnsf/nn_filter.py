"""Adaptive neural-network stochastic attitude filter.

One filter tick consumes the current measurement frame and produces the
next attitude estimate together with updated bias and noise-weight
estimates. The correction is a single-layer network: a fixed random
input matrix feeds a tanh layer whose output is mixed by the adapted
weight matrices. The attitude state is either a rotation matrix or a
unit quaternion; both backends advance through the exact group
exponential and stay numerically interchangeable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import quat, so3
from .so3 import cross3
from .rigid_body import MeasurementFrame, validate_refs

GAMMA_SCALE = 2.0  # default magnitude of the fixed mixing matrices


@dataclass
class FilterGains:
    """Fixed filter parameters: neuron count, mixing matrices, scalar rates."""

    q: int
    Gamma_b: np.ndarray
    Gamma_sigma: np.ndarray
    k_ob: float
    k_osigma: float
    gamma_b: float
    K_ups: np.ndarray

    def __post_init__(self):
        self.Gamma_b = np.asarray(self.Gamma_b, dtype=float)
        self.Gamma_sigma = np.asarray(self.Gamma_sigma, dtype=float)
        self.K_ups = np.asarray(self.K_ups, dtype=float)
        if self.q < 1:
            raise ValueError("neuron count must be a positive integer")
        if self.Gamma_b.shape != (self.q, 3) or self.K_ups.shape != (self.q, 3):
            raise ValueError("Gamma_b and K_ups must have shape (q, 3)")
        if self.Gamma_sigma.shape != (self.q, self.q):
            raise ValueError("Gamma_sigma must have shape (q, q)")
        if np.any(self.Gamma_sigma != np.diag(np.diag(self.Gamma_sigma))) or np.any(
            np.diag(self.Gamma_sigma) <= 0.0
        ):
            raise ValueError("Gamma_sigma must be diagonal with positive entries")
        if min(self.k_ob, self.k_osigma, self.gamma_b) <= 0.0:
            raise ValueError("scalar filter gains must be positive")
        gtg = self.Gamma_b.T @ self.Gamma_b
        if np.min(np.linalg.eigvalsh(gtg)) < 1e-12:
            raise ValueError("Gamma_b^T Gamma_b must be positive definite")
        # Precomposed maps used by the per-tick correction.
        self._Gb_T = self.Gamma_b.T.copy()
        self._GtG_inv_Gt = np.linalg.solve(gtg, self._Gb_T)


def default_gamma_b(q: int) -> np.ndarray:
    """Default bias mixing matrix: row i carries GAMMA_SCALE in column i mod 3.

    Reduces to ``2 I3`` at q = 3 and keeps ``Gamma_b^T Gamma_b``
    positive definite for any q.
    """
    G = np.zeros((q, 3))
    for i in range(q):
        G[i, i % 3] = GAMMA_SCALE
    return G


def default_k_ups(q: int, rng: np.random.Generator) -> np.ndarray:
    """Random input weights: each neuron reads one innovation axis.

    Neuron i carries a draw from U[2, 4) scaled by 3/q in column i mod 3
    and zero elsewhere. The axis assignment keeps the correction pathway
    monotone for every draw (a dense uniform matrix frequently produces
    corrections misaligned with the innovation and the filter wanders),
    and the fan-in scaling keeps the layer's aggregate slope independent
    of the neuron count, so extra neurons refine the approximation
    instead of amplifying measurement noise.
    """
    K = np.zeros((q, 3))
    K[np.arange(q), np.arange(q) % 3] = (2.0 + 2.0 * rng.random(q)) * (3.0 / q)
    return K


def make_filter_gains(
    q: int = 3,
    k_ob: float = 1.0,
    k_osigma: float = 1.0,
    gamma_b: float = 1.0,
    K_ups: np.ndarray | None = None,
    rng: np.random.Generator | None = None,
) -> FilterGains:
    """Build gains with the benchmark defaults for any neuron count.

    ``K_ups`` defaults to :func:`default_k_ups` draws from ``rng``; pass
    it explicitly for reproducibility without a generator.
    """
    if K_ups is None:
        if rng is None:
            raise ValueError("either K_ups or rng must be provided")
        K_ups = default_k_ups(q, rng)
    return FilterGains(
        q=q,
        Gamma_b=default_gamma_b(q),
        Gamma_sigma=GAMMA_SCALE * np.eye(q),
        k_ob=k_ob,
        k_osigma=k_osigma,
        gamma_b=gamma_b,
        K_ups=K_ups,
    )


@dataclass
class FilterState:
    """Mutable estimate triplet: attitude, gyro bias, noise weight matrix.

    ``attitude`` is a 3x3 rotation matrix under the matrix backend or a
    length-4 unit quaternion under the quaternion backend.
    """

    attitude: np.ndarray
    W_b_hat: np.ndarray
    W_sigma_hat: np.ndarray

    @property
    def R_hat(self) -> np.ndarray:
        if self.attitude.shape == (3, 3):
            return self.attitude
        return quat.rot_from_quat(self.attitude)


def make_filter_state(q: int, R_hat=None, backend: str = "matrix") -> FilterState:
    """Initial filter state: given (or identity) attitude, zero weights."""
    R = np.eye(3) if R_hat is None else so3.check_rotation(R_hat, name="R_hat")
    att = quat.quat_from_rot(R) if backend == "quaternion" else R
    return FilterState(att, np.zeros(3), np.zeros((q, q)))


@dataclass
class InnovationBundle:
    """Per-tick diagnostics: innovation, weighted distance, adaptive gains, correction."""

    ups_o: np.ndarray
    dist: float
    psi1: float
    psi2: float
    phi: np.ndarray
    C: np.ndarray


def innovation(y, refs, R_hat) -> tuple[np.ndarray, float]:
    """Vector-measurement innovation and weighted attitude distance.

    ``ups_o = sum_i (s_i / 2) (yhat_i x y_i)`` with ``yhat_i = R_hat^T r_i``;
    ``dist = (1/4) sum_i s_i (1 - y_i . yhat_i)``, the trace form of the
    weighted estimation-error distance. Needs two non-collinear references.
    """
    validate_refs(refs)
    ups = np.zeros(3)
    dist = 0.0
    Rt = R_hat.T
    for yi, (r, s) in zip(y, refs):
        yhat = Rt @ r
        ups += (0.5 * s) * cross3(yhat, yi)
        dist += 0.25 * s * (1.0 - yi @ yhat)
    return ups, dist


def psi(dist: float) -> tuple[float, float]:
    """Adaptive gain pair ``((dist+1) e^dist, (dist+2) e^dist)``."""
    e = math.exp(dist)
    return (dist + 1.0) * e, (dist + 2.0) * e


def activation(ups_o, K_ups) -> np.ndarray:
    """Neuron layer output ``tanh(K_ups @ ups_o)``."""
    return np.tanh(K_ups @ ups_o)


def weight_update(
    fs: FilterState, phi, psi1: float, psi2: float, g: FilterGains, dt: float
) -> FilterState:
    """Advance the bias and noise-weight estimates one explicit Euler step."""
    W_b = fs.W_b_hat + (dt * g.gamma_b) * (psi1 * (g._Gb_T @ phi) - g.k_ob * fs.W_b_hat)
    W_sigma = fs.W_sigma_hat + dt * (
        g.Gamma_sigma @ ((0.25 * psi2) * np.outer(phi, phi) - g.k_osigma * fs.W_sigma_hat)
    )
    return FilterState(fs.attitude, W_b, W_sigma)


def correction(phi, psi1: float, psi2: float, W_sigma_hat, g: FilterGains) -> np.ndarray:
    """Attitude correction mixing the neuron output and the noise-weight estimate.

    ``C = (Gamma_b^T + (psi2 / 4 psi1) (Gamma_b^T Gamma_b)^-1 Gamma_b^T
    W_sigma_hat) phi``. The first term is read as ``Gamma_b^T`` so the
    product is well defined for q != 3; at q = 3 it equals the printed
    ``Gamma_b^T I3``.
    """
    return g._Gb_T @ phi + (0.25 * psi2 / psi1) * (g._GtG_inv_Gt @ (W_sigma_hat @ phi))


def attitude_update(fs: FilterState, Omega_m, C, dt: float) -> FilterState:
    """Advance the attitude estimate along the corrected gyro rate."""
    h = Omega_m - fs.W_b_hat - C
    if fs.attitude.shape == (3, 3):
        att = fs.attitude @ so3.exp_so3(h, dt)
    else:
        att = quat.quat_step(fs.attitude, h, dt)
    return FilterState(att, fs.W_b_hat, fs.W_sigma_hat)


def filter_step(
    fs: FilterState, frame: MeasurementFrame, refs, g: FilterGains, dt: float
) -> tuple[FilterState, InnovationBundle]:
    """One full filter tick in the discrete-algorithm order.

    innovation -> adaptive gains -> activation -> weight update ->
    correction -> attitude update. The weights advance with the
    pre-update activation; the correction then uses the just-updated
    noise weights, and the attitude integrates with the just-updated
    bias estimate.
    """
    ups_o, dist = innovation(frame.y, refs, fs.R_hat)
    psi1, psi2 = psi(dist)
    phi = activation(ups_o, g.K_ups)
    fs = weight_update(fs, phi, psi1, psi2, g, dt)
    C = correction(phi, psi1, psi2, fs.W_sigma_hat, g)
    fs = attitude_update(fs, frame.Omega_m, C, dt)
    return fs, InnovationBundle(ups_o, dist, psi1, psi2, phi, C)
