import numpy as np

from germkit.minors import milnor_set_ideal, singular_set_ideal
from germkit.poly import PolyMap
from germkit.tameness import TamenessConfig, _Engine

XYZW = ("x", "y", "z", "w")
h = PolyMap.from_strings(["x*y", "y*z*(x^2+y^2+z^4)"], XYZW)
sing = singular_set_ideal(h)
milnor = milnor_set_ideal(h)
print("Sing gens:", [str(g) for g in sing.generators])
print("M gens:", [str(g) for g in milnor.generators])

cfg = TamenessConfig()
engine = _Engine(milnor, sing, sing, push=None, config=cfg)
print("pool size:", len(engine.pool))
for p in engine.pool[:8]:
    print("  pool pt:", np.round(p, 5), "offSing est:", engine.off_excluded_distance(p))

verdict = engine.run()
print("status:", verdict.status, verdict.evidence.get("flags"))
for t in verdict.evidence["targets"]:
    print(
        f"  r={t['radius']:.3f} d*={t['best_distance']:.3e} rungs={t['rungs_completed']} "
        f"{t['classification']} refined={np.round(t['refined'], 4)}"
    )
