"""Tour of the SO(3) toolbox: maps, identities, and the innovation sandwich."""

import numpy as np

from attnnsf import so3

rng = np.random.default_rng(1)

u = np.array([1.0, 2.0, 3.0])
print("hat(u) =\n", so3.hat(u))
print("vex(hat(u)) =", so3.vex(so3.hat(u)))
print("upsilon(hat(u)) =", so3.upsilon(so3.hat(u)))

# the exponential map stays exactly on the manifold
w = rng.normal(size=3)
R = so3.exp_so3(w, 1.0)
print("\nexp_so3 orthonormality error:", np.max(np.abs(R.T @ R - np.eye(3))))
print("attitude distance of R:", so3.ecl_dist(R))
roll, pitch, yaw = so3.euler_zyx(R)
print("euler (zyx):", (roll, pitch, yaw))
print("recompose error:", np.max(np.abs(so3.rot_zyx(roll, pitch, yaw) - R)))

# conjugation identity R [y]x R^T = [R y]x
y = rng.normal(size=3)
print("\nconjugation identity error:",
      np.max(np.abs(R @ so3.hat(y) @ R.T - so3.hat(R @ y))))

# weighted innovation sandwich: for PSD M with rank >= 2,
#   lam_min(Mbar)^2 d(1-d) <= |upsilon(M R)|^2 <= lam_max(Mbar)^2 d
M = sum(np.outer(v, v) for v in rng.normal(size=(3, 3)))
lams = np.linalg.eigvalsh(so3.mbar(M))
d = so3.ecl_dist(R)
val = float(so3.upsilon(M @ R) @ so3.upsilon(M @ R))
print("\nsandwich:", lams[0] ** 2 * d * (1 - d), "<=", val, "<=", lams[-1] ** 2 * d)
