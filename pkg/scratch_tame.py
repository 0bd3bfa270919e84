import time

from germkit.poly import PolyMap, parse_polynomial
from germkit.tameness import TamenessConfig, check_tame

XYZW = ("x", "y", "z", "w")
UVT = ("u", "v", "t")
R5 = ("x", "y", "z", "w", "k")
UVTS = ("u", "v", "t", "s")

cases = [
    # (label, map strings, variables, rho text or None, expected)
    ("4.2 F", ["x", "y", "z*(x^2+y^2+z^4)"], XYZW, None, "Tame"),
    ("4.2 G", ["u*v", "v*t"], UVT, None, "Tame"),
    ("4.2 H", ["x*y", "y*z*(x^2+y^2+z^4)"], XYZW, None, "NotTame"),
    ("4.6 F", ["x", "y", "z*(x^2+y^2+z^2+w^2)"], XYZW, None, "Tame"),
    ("4.6 G", ["u*t", "v*t"], UVT, None, "Tame"),
    ("4.6 H", ["x*z*(x^2+y^2+z^2+w^2)", "y*z*(x^2+y^2+z^2+w^2)"], XYZW, None, "Tame"),
    ("4.7 F", ["x^2+y^2", "z*(x^2+y^2)", "w*(x^2+y^2)"], XYZW, None, "NotTame"),
    ("4.8 F", ["1/3*x*w", "y*w", "z*w"], XYZW, None, "Tame"),
    ("4.8 G", ["u*t", "v*t*(9*u^2+v^2+t^2)"], UVT, None, "NotTame"),
    ("4.8 H", ["1/3*w^2*x*z", "w^4*y*z*(x^2+y^2+z^2)"], XYZW, None, "Tame"),
    ("4.9 F", ["x", "y", "z", "x*w"], R5, None, "NotTame"),
    ("4.9 G", ["u*t", "v*t"], UVTS, None, "Tame"),
    ("4.9 H", ["x*z", "y*z"], R5, None, "Tame"),
    ("4.2 H alt-rho", ["x*y", "y*z*(x^2+y^2+z^4)"], XYZW, "x^2+y^2+z^4+w^2", "Tame"),
    ("4.8 G alt-rho", ["u*t", "v*t*(9*u^2+v^2+t^2)"], UVT, "9*u^2+v^2+t^2", "Tame"),
]

config = TamenessConfig()
for label, comps, variables, rho_text, expected in cases:
    f = PolyMap.from_strings(comps, variables)
    rho = parse_polynomial(rho_text, variables) if rho_text else None
    t0 = time.time()
    try:
        verdict = check_tame(f, rho, config)
        status = verdict.status
        flags = verdict.evidence.get("flags")
        wit = verdict.witness.target if verdict.witness else None
    except Exception as err:
        status, flags, wit = f"ERROR {type(err).__name__}: {err}", None, None
    dt = time.time() - t0
    ok = "OK " if status == expected else ">>> MISMATCH"
    print(f"{ok} {label:16s} expected={expected:8s} got={status:12s} {dt:6.2f}s flags={flags} witness={wit}")
