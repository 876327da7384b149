import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from attnnsf import so3
from attnnsf.rigid_body import (
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
    validate_refs,
)

rng = np.random.default_rng(99)

J_BENCH = np.diag([0.016, 0.015, 0.03])
D_BENCH = np.array([0.1, 0.3, 0.2])


def make_rng(seed=0, n_sensors=2):
    children = np.random.SeedSequence(seed).spawn(1 + n_sensors)
    gens = [np.random.Generator(np.random.Philox(c)) for c in children]
    return MeasurementRng(gens[0], gens[1:])


def two_sensor_params(noise=0.0, W_b=(0.0, 0.0, 0.0), bias=False):
    b1 = [0.01, 0.005, -0.04] if bias else [0.0] * 3
    b2 = [0.025, -0.03, 0.02] if bias else [0.0] * 3
    return SensorParams(
        W_b=np.asarray(W_b, float),
        gyro_noise_std=noise,
        refs=[
            ReferenceSensor(r=np.array([1.0, 1.0, -1.0]) / math.sqrt(3), b=b1, noise_std=noise),
            ReferenceSensor(r=[0.0, 0.0, 1.0], b=b2, noise_std=noise),
        ],
    )


def test_desired_rate_dot_values():
    assert_allclose(desired_rate_dot(0.0), [0.0707107, 0.0433013, 0.0], atol=5e-8)
    ts = np.linspace(0.0, 200.0, 4001)
    bound = 0.1 * math.sqrt(1.0 + 0.25 + 0.64)
    assert all(np.linalg.norm(desired_rate_dot(t)) <= bound + 1e-12 for t in ts)
    # third component peaks at 0.08 where its cosine argument hits 2*pi
    t_star = (2.0 * math.pi - math.pi / 2.0) / 0.12
    assert_allclose(desired_rate_dot(t_star)[2], 0.08, atol=1e-12)


def test_desired_step_constant_when_rate_zero():
    ds = DesiredState(np.eye(3), np.zeros(3), np.zeros(3))
    out = desired_step(ds, 0.0, 0.01)
    assert_allclose(out.R_d, np.eye(3))  # pre-update rate is zero


def test_desired_step_first_step_uses_current_rate():
    Omega0 = np.array([0.3, -0.1, 0.2])
    ds = DesiredState(np.eye(3), Omega0, desired_rate_dot(0.0))
    out = desired_step(ds, 0.0, 0.01)
    assert_allclose(out.R_d, so3.exp_so3(Omega0, 0.01), atol=1e-15)
    assert_allclose(out.Omega_d, Omega0 + 0.01 * desired_rate_dot(0.0))
    assert_allclose(out.Omega_d_dot, desired_rate_dot(0.01))


def test_desired_step_long_run_orthonormal():
    ds = DesiredState(np.eye(3), np.zeros(3), desired_rate_dot(0.0))
    for k in range(5000):
        ds = desired_step(ds, k * 0.01, 0.01)
    assert np.max(np.abs(ds.R_d.T @ ds.R_d - np.eye(3))) < 1e-9


def test_truth_step_equilibrium():
    p = InertiaParams(J_BENCH, D_BENCH)
    s = BodyState(np.eye(3), np.zeros(3))
    out = truth_step(s, -D_BENCH, p, 0.01)
    assert_allclose(out.R, np.eye(3))
    assert_allclose(out.Omega, np.zeros(3))


def test_truth_step_symmetric_body_spin():
    p = InertiaParams(np.eye(3), np.zeros(3))
    s = BodyState(np.eye(3), np.array([0.0, 0.0, 1.0]))
    for k in range(100):
        s = truth_step(s, np.zeros(3), p, 0.01)
    assert_allclose(s.Omega, [0.0, 0.0, 1.0])
    assert_allclose(s.R, so3.exp_so3([0.0, 0.0, 1.0], 1.0), atol=1e-12)


def test_truth_step_matches_refined_reference_at_second_order():
    # Richardson-style oracle: the distance to a finely-substepped
    # reference must shrink by ~4x when dt halves.
    p = InertiaParams(J_BENCH, D_BENCH)
    s0 = BodyState(np.eye(3), np.array([0.2, 0.3, 0.3]))

    def err(dt):
        coarse = truth_step(s0, np.zeros(3), p, dt)
        fine = truth_step(s0, np.zeros(3), p, dt, substeps=1024)
        return np.max(np.abs(coarse.R - fine.R)) + np.max(np.abs(coarse.Omega - fine.Omega))

    e1, e2 = err(0.02), err(0.01)
    assert e2 < 5e-3  # disturbance drives ~20 rad/s^2 here
    assert 3.0 < e1 / e2 < 5.0


def test_truth_long_run_stays_on_so3():
    p = InertiaParams(J_BENCH, np.zeros(3))
    s = BodyState(so3.exp_so3(rng.normal(size=3)), np.array([0.2, 0.3, 0.3]))
    for _ in range(5000):
        s = truth_step(s, np.zeros(3), p, 0.01)
    assert np.max(np.abs(s.R.T @ s.R - np.eye(3))) < 1e-9


def test_torque_free_momentum_drift_vanishes_with_dt():
    p = InertiaParams(J_BENCH, np.zeros(3))

    def drift(dt, steps):
        s = BodyState(np.eye(3), np.array([0.4, -0.2, 0.5]))
        h0 = np.linalg.norm(p.J @ s.Omega)
        for _ in range(steps):
            s = truth_step(s, np.zeros(3), p, dt)
        return abs(np.linalg.norm(p.J @ s.Omega) - h0)

    d1 = drift(0.01, 1000)
    d2 = drift(0.005, 2000)
    assert d1 < 1e-3
    assert 1.5 < d1 / d2 < 3.0


def test_measure_noise_free_identity():
    sp = two_sensor_params()
    s = BodyState(np.eye(3), np.array([0.1, 0.2, 0.3]))
    frame = measure(s, sp, make_rng())
    assert_allclose(frame.Omega_m, s.Omega)
    for yi, ref in zip(frame.y, sp.refs):
        assert_allclose(yi, ref.r, atol=1e-15)
        assert abs(np.linalg.norm(yi) - 1.0) < 1e-12


def test_measure_benchmark_bias_sum():
    sp = two_sensor_params(W_b=(0.03, 0.015, 0.021))
    s = BodyState(np.eye(3), np.array([0.2, 0.3, 0.3]))
    frame = measure(s, sp, make_rng())
    assert_allclose(frame.Omega_m, [0.23, 0.315, 0.321])


def test_measure_gyro_noise_statistics():
    sp = two_sensor_params(W_b=(0.0, 0.0, 0.0))
    sp.gyro_noise_std = 0.05
    s = BodyState(np.eye(3), np.zeros(3))
    mr = make_rng(seed=5)
    draws = np.array([measure(s, sp, mr).Omega_m for _ in range(40000)]).ravel()
    n = draws.size
    assert abs(draws.mean()) < 3.0 * 0.05 / math.sqrt(n)
    assert abs(draws.std() - 0.05) < 0.02 * 0.05


def test_measure_deterministic_given_stream():
    sp = two_sensor_params(noise=0.05)
    s = BodyState(np.eye(3), np.zeros(3))
    f1 = measure(s, sp, make_rng(seed=3))
    f2 = measure(s, sp, make_rng(seed=3))
    assert_allclose(f1.Omega_m, f2.Omega_m)
    for a, b in zip(f1.y, f2.y):
        assert_allclose(a, b)


def test_measure_degenerate_vector_fails_after_redraw():
    sp = SensorParams(
        W_b=np.zeros(3),
        gyro_noise_std=0.0,
        refs=[
            ReferenceSensor(r=[0.0, 0.0, 1.0], b=[0.0, 0.0, -1.0], noise_std=0.0),
            ReferenceSensor(r=[1.0, 0.0, 0.0]),
        ],
    )
    s = BodyState(np.eye(3), np.zeros(3))
    with pytest.raises(ArithmeticError):
        measure(s, sp, make_rng())


def test_weighted_gram_matrices_transform():
    # noise-free: sum s y y^T equals R^T (sum s r r^T) R
    sp = two_sensor_params()
    R = so3.exp_so3(rng.normal(size=3))
    s = BodyState(R, np.zeros(3))
    frame = measure(s, sp, make_rng())
    M_r = sum(ref.s * np.outer(ref.r, ref.r) for ref in sp.refs)
    M_y = sum(ref.s * np.outer(yi, yi) for yi, ref in zip(frame.y, sp.refs))
    assert_allclose(M_y, R.T @ M_r @ R, atol=1e-12)


def test_validate_refs_errors():
    with pytest.raises(ValueError):
        validate_refs([(np.array([1.0, 0, 0]), 1.0)])
    with pytest.raises(ValueError):
        validate_refs([(np.array([1.0, 0, 0]), 1.0), (np.array([-1.0, 0, 0]), 1.0)])
    validate_refs([(np.array([1.0, 0, 0]), 1.0), (np.array([0.0, 1, 0]), 1.0)])


def test_inertia_validation():
    with pytest.raises(ValueError):
        InertiaParams(np.diag([1.0, 1.0, -1.0]), np.zeros(3))
    with pytest.raises(ValueError):
        InertiaParams(np.array([[1.0, 0.5, 0], [0, 1, 0], [0, 0, 1]]), np.zeros(3))
