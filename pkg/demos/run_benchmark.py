"""Single benchmark run: huge initial error, corrupted sensors, unknown disturbance.

Reproduces the headline closed-loop experiment (dt = 0.01, 50 s, three
neurons) for one seed, prints the convergence story, and writes the CSV
log that the plotting frontend consumes.
"""

import sys

import numpy as np

from attnnsf import SimConfig, export, run_simulation, steady_state_stats

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 1
cfg = SimConfig(seed=seed)
rec = run_simulation(cfg)

t = rec.column("t")
ro = rec.column("Ro_dist")
rc = rec.column("Rc_dist")

print(f"seed {seed}")
print(f"initial estimation distance {ro[0]:.4f}, tracking distance {rc[0]:.4f}")
for name, col in (("estimation", ro), ("tracking", rc)):
    idx = np.nonzero(col < 0.01)[0]
    when = f"{t[idx[0]]:.2f} s" if idx.size else "never"
    print(f"{name} distance drops below 0.01 at {when}")

stats = steady_state_stats(rec, 4.0, 50.0, seed=seed)
print(f"steady-state estimation distance over [4, 50] s: "
      f"mean {stats.mean:.3e}, std {stats.std:.3e}")
print(f"disturbance residual over [20, 50] s: "
      f"{rec.column('dist_err')[t >= 20].mean():.3f} N·m "
      f"(disturbance magnitude {np.linalg.norm(cfg.d):.3f})")

out = f"run_q{cfg.neurons}_seed{seed}.csv"
export(rec, out, "csv")
print(f"wrote {out}")
