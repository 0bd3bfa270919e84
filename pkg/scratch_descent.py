import numpy as np

from germkit.minors import milnor_set_ideal, singular_set_ideal
from germkit.poly import PolyMap
from germkit.sampling import spawn_rngs
from germkit.tameness import TamenessConfig, _Engine

XYZW = ("x", "y", "z", "w")
h = PolyMap.from_strings(["x*y", "y*z*(x^2+y^2+z^4)"], XYZW)
cfg = TamenessConfig()
engine = _Engine(milnor_set_ideal(h), singular_set_ideal(h), singular_set_ideal(h), None, cfg)
rng = spawn_rngs(123, 1)[0]

radius = 0.2
y = np.array([0.05, 0.0, 0.15, 0.1236])
y *= radius / np.linalg.norm(y)
warm = []
d_prev = None
for it in range(40):
    hint = 3.0 * d_prev if d_prev is not None else None
    found = engine.seek(y, None, rng, warm, 12 if it == 0 else 6, scale_hint=hint)
    if found is None:
        print(it, "seek found nothing")
        break
    x, d = found
    warm = [x]
    print(
        f"it={it:2d} d={d:.3e} y={np.round(y, 5)} x_y={x[1]:.2e} x_w={x[3]:.2e} "
        f"offSing={engine.off_excluded_distance(x):.2e} onApp={engine.on_approach_error(x):.2e}"
    )
    if d <= 0.5 * cfg.witness_tol:
        print("deep enough")
        break
    d_prev = d
    y = engine.refine_target(y, x, radius, rng)
