import numpy as np

from germkit.minors import milnor_set_ideal, singular_set_ideal
from germkit.poly import PolyMap
from germkit.sampling import gauss_newton, spawn_rngs
from germkit.tameness import TamenessConfig, _Engine

XYZW = ("x", "y", "z", "w")
h = PolyMap.from_strings(["x*y", "y*z*(x^2+y^2+z^4)"], XYZW)
cfg = TamenessConfig()
engine = _Engine(milnor_set_ideal(h), singular_set_ideal(h), singular_set_ideal(h), None, cfg)
rng = spawn_rngs(5, 1)[0]

y = np.array([0.04371, 0.0, 0.19517, 0.0])
x0 = np.array([0.0437, 2.05e-04, 0.1952, 0.0])
x = gauss_newton(engine.approach_sys, x0, cfg.sampler, rng)
print("projected start:", x, "res:", np.max(np.abs(engine.approach_sys.residual(x))))
print("start distance:", np.linalg.norm(x - y))

traj = engine.slide(x, y, rng, iters=12)
for i, p in enumerate(traj):
    d = np.linalg.norm(p - y)
    print(
        f"traj[{i}] d={d:.3e} y-coord={p[1]:.3e} offSing={engine.off_excluded_distance(p):.3e} "
        f"onApp={engine.on_approach_error(p):.3e}"
    )

# Manually inspect the tangent space at the projected start.
jac = engine.approach_sys.jacobian(x)
u, s, vt = np.linalg.svd(jac)
print("singular values:", s)
cutoff = s[0] * 1e-8
rank = int(np.sum(s > cutoff))
print("rank:", rank, "null-dim:", 4 - rank)
null = vt[rank:].T
print("null basis:\n", np.round(null, 6))
r = x - y
print("tangential displacement:", null @ (null.T @ r))
