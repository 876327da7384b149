"""Noise-free sanity check: a perfectly initialized loop stays locked.

With all corruption switched off and perfect initialization the filter
innovation is identically zero and the feedforward torque cancels the
desired dynamics exactly, so every error column sits at floating-point
level. Refining dt only moves numbers around machine precision.
"""

import numpy as np

from attnnsf import SimConfig, run_simulation

COLS = ("Ro_dist", "Rc_dist", "omega_err", "dist_err", "wb_norm", "wsigma_fro")

for dt in (0.01, 0.001):
    cfg = SimConfig(
        dt=dt, duration=50.0, noise_free=True,
        R0=[[1, 0, 0], [0, 1, 0], [0, 0, 1]], Omega0=[0, 0, 0],
    )
    rec = run_simulation(cfg)
    worst = max(float(np.max(np.abs(rec.column(c)))) for c in COLS)
    print(f"dt = {dt:<6} worst error over 50 s: {worst:.3e}")
