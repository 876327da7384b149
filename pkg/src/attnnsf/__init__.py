"""Adaptive NN stochastic attitude filter and SO(3) tracking controller."""

from .controller import ControlGains, ControllerState, control_innovation, controller_step, disturbance_update, torque
from .harness import (
    CSV_COLUMNS,
    CSV_HEADER,
    MonteCarloResult,
    RunRecord,
    SimConfig,
    SummaryStats,
    export,
    monte_carlo,
    run_simulation,
    steady_state_stats,
)
from .nn_filter import (
    FilterGains,
    FilterState,
    InnovationBundle,
    activation,
    attitude_update,
    correction,
    filter_step,
    innovation,
    make_filter_gains,
    make_filter_state,
    psi,
    weight_update,
)
from .quat import quat_from_rot, quat_mul, quat_step, rot_from_quat
from .rigid_body import (
    BodyState,
    DesiredState,
    InertiaParams,
    MeasurementFrame,
    MeasurementRng,
    ReferenceSensor,
    SensorParams,
    desired_rate_dot,
    desired_step,
    measure,
    truth_step,
)
from .so3 import (
    AxisAngle,
    GimbalLockWarning,
    axis_angle,
    ecl_dist,
    euler_zyx,
    exp_so3,
    hat,
    is_rotation,
    mbar,
    pa,
    project_rotation,
    rot_zyx,
    upsilon,
    vex,
)

__version__ = "0.1.0"
