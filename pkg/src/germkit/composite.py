"""Composite-pair analysis: set lattice, discriminant evidence, image clouds.

For a composable pair (F, G) with H = G o F this module assembles the
singular and Milnor sets of all three maps, checks the inclusion lattice
relating them on sampled points, gathers evidence that discriminants are
concentrated at the origin, and pushes the off-singular part of the Milnor
set of H forward through F (the operational surrogate for the closure of
F(M(H) \\ Sing H) used by the composite tameness criterion).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Sequence

import numpy as np

from .errors import NoConvergence, PreconditionNotMet
from .minors import (
    IdealGenerators,
    determinant,
    jacobian,
    milnor_set_ideal,
    singular_set_ideal,
)
from .poly import PolyMap, Polynomial, compose
from .sampling import (
    CompiledSystem,
    SampleCloud,
    sample_on_sphere,
    set_difference_samples,
    spawn_rngs,
)
from .semialg import ConstructibleSet
from .tameness import TamenessConfig

MEMBER_TOL = 1e-8


def zero_locus_ideal(f: PolyMap) -> IdealGenerators:
    """The zero locus of the map as a generator family (V_f)."""
    return IdealGenerators.from_polynomials(f.variables, list(f.components))


def pullback_ideal(f: PolyMap, ideal: IdealGenerators) -> IdealGenerators:
    """Generators of the preimage variety: each generator composed with f."""
    gens = [g.substitute(list(f.components)) for g in ideal.generators]
    return IdealGenerators.from_polynomials(f.variables, gens)


# ---------------------------------------------------------------------------
# discriminant evidence


@dataclass
class DiscEvidence:
    verdict: str  # OriginOnly | NontrivialValue | Inconclusive
    witness: tuple[float, ...] | None
    route: str  # exact | sampling | empty
    detail: dict


def _coordinate_subspaces_inside(ideal: IdealGenerators) -> list[tuple[int, ...]]:
    """Maximal coordinate subspaces {x_i = 0, i in S} inside the zero locus.

    Returns the minimal index sets S (smaller S = bigger subspace) whose
    substitution kills every generator exactly.
    """
    nvars = len(ideal.variables)
    found: list[tuple[int, ...]] = []
    for size in range(1, nvars + 1):
        for subset in combinations(range(nvars), size):
            if any(set(prev) <= set(subset) for prev in found):
                continue
            if all(_vanishes_on_subspace(g, subset) for g in ideal.generators):
                found.append(subset)
    return found


def _vanishes_on_subspace(p: Polynomial, zeroed: tuple[int, ...]) -> bool:
    zeroed_set = set(zeroed)
    return all(
        any(exps[i] > 0 for i in zeroed_set) for exps in p.terms
    )


def _rational_point_on_subspace(
    f: PolyMap, zeroed: tuple[int, ...]
) -> tuple[Fraction, ...] | None:
    """A small rational point of the subspace where f does not vanish."""
    free = [i for i in range(f.source_dim) if i not in zeroed]
    trial_values = [Fraction(1, 20), Fraction(-1, 23), Fraction(1, 31)]
    for assignment in product(trial_values, repeat=len(free)):
        point = [Fraction(0)] * f.source_dim
        for idx, value in zip(free, assignment):
            point[idx] = value
        if any(c.evaluate_exact(point) != 0 for c in f.components):
            return tuple(point)
    return None


def disc_evidence(f: PolyMap, config: TamenessConfig = TamenessConfig()) -> DiscEvidence:
    """Evidence for Disc f = {0}: does f vanish on its singular set near 0?

    The exact shortcut substitutes identified coordinate subspaces of the
    singular set into f; it fires only when those subspaces also cover the
    sampled singular points.  Otherwise the verdict rests on the sampled
    image magnitudes, and starved sampling degrades to Inconclusive.
    """
    sing = singular_set_ideal(f)
    if sing.is_trivially_empty():
        return DiscEvidence("OriginOnly", None, "empty", {"reason": "singular set empty"})
    image_tol = 1e-6
    order_floor = 1

    subspaces = _coordinate_subspaces_inside(sing)
    vanishing: list[tuple[int, ...]] = []
    for subset in subspaces:
        if all(_vanishes_on_subspace(c, subset) for c in f.components):
            vanishing.append(subset)
        else:
            witness = _rational_point_on_subspace(f, subset)
            if witness is not None:
                # Scale the witness into the germ ball for reporting.
                norm = math.sqrt(sum(float(v) ** 2 for v in witness))
                scale = 0.05 / norm if norm > 0.05 else 1.0
                pt = tuple(float(v) * scale for v in witness)
                if max(abs(v) for v in f.evaluate_float(pt)) > image_tol:
                    return DiscEvidence(
                        "NontrivialValue", pt, "exact", {"subspace": list(subset)}
                    )

    sing_set = ConstructibleSet.variety(sing)
    v_set = ConstructibleSet.variety(zero_locus_ideal(f))
    samples: list[tuple[float, ...]] = []
    starved = False
    rngs = spawn_rngs(config.seed + 13, len(config.radii()))
    for radius, rng in zip(config.radii(), rngs):
        try:
            cloud = sample_on_sphere(
                sing_set, radius, config.targets_per_radius,
                int(rng.integers(0, 2**31)), config.sampler,
            )
        except NoConvergence as err:
            if err.diagnostics.get("best_residual", math.inf) <= 1e3 * config.sampler.tol:
                starved = True
            continue
        samples.extend(cloud.points)

    if not samples:
        if starved:
            return DiscEvidence("Inconclusive", None, "sampling", {"reason": "starved"})
        return DiscEvidence(
            "OriginOnly", None, "empty", {"reason": "no singular points on the ladder"}
        )

    covered = vanishing and all(
        any(max(abs(pt[i]) for i in subset) <= 1e-6 for subset in vanishing)
        for pt in samples
    )
    if covered:
        return DiscEvidence(
            "OriginOnly",
            None,
            "exact",
            {"subspaces": [list(s) for s in vanishing], "samples": len(samples)},
        )

    all_small = True
    for pt in samples:
        image = f.evaluate_float(pt)
        norm_image = math.sqrt(sum(v * v for v in image))
        norm_pt = math.sqrt(sum(v * v for v in pt))
        if norm_image > image_tol and not v_set.member_float(pt, MEMBER_TOL):
            return DiscEvidence(
                "NontrivialValue", tuple(pt), "sampling", {"image_norm": norm_image}
            )
        if norm_image > image_tol * norm_pt**order_floor:
            all_small = False
    if all_small:
        return DiscEvidence("OriginOnly", None, "sampling", {"samples": len(samples)})
    return DiscEvidence("Inconclusive", None, "sampling", {"samples": len(samples)})


# ---------------------------------------------------------------------------
# lattice checks


@dataclass
class CheckResult:
    name: str
    status: str  # holds | fails | vacuous
    witness: tuple[float, ...] | None = None
    radii: list[float] = field(default_factory=list)
    detail: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "status": self.status,
            "witness": list(self.witness) if self.witness is not None else None,
            "radii": self.radii,
            "detail": self.detail,
        }


def _sample_variety(
    ideal: IdealGenerators, config: TamenessConfig, seed_shift: int, count: int
) -> tuple[list[tuple[float, ...]], dict]:
    points: list[tuple[float, ...]] = []
    cset = ConstructibleSet.variety(ideal)
    diagnostics: dict = {"radii_with_points": []}
    if ideal.is_trivially_empty():
        return points, diagnostics
    rngs = spawn_rngs(config.seed + seed_shift, len(config.radii()))
    for radius, rng in zip(config.radii(), rngs):
        try:
            cloud = sample_on_sphere(
                cset, radius, count, int(rng.integers(0, 2**31)), config.sampler
            )
        except NoConvergence:
            continue
        diagnostics["radii_with_points"].append(radius)
        points.extend(cloud.points)
    return points, diagnostics


def check_sing_inclusion(
    f: PolyMap, g: PolyMap, config: TamenessConfig = TamenessConfig()
) -> CheckResult:
    """Chain-rule inclusion: Sing H inside Sing F union F^{-1}(Sing G)."""
    h = compose(g, f)
    sing_h = singular_set_ideal(h)
    sing_f_set = ConstructibleSet.variety(singular_set_ideal(f))
    sing_g_set = ConstructibleSet.variety(singular_set_ideal(g))
    points, diagnostics = _sample_variety(sing_h, config, 7, config.targets_per_radius)
    if not points:
        return CheckResult("sing_inclusion", "vacuous", detail=diagnostics)
    for pt in points:
        in_f = sing_f_set.member_float(pt, MEMBER_TOL)
        in_g = sing_g_set.member_float(f.evaluate_float(pt), MEMBER_TOL)
        if not (in_f or in_g):
            return CheckResult(
                "sing_inclusion", "fails", tuple(pt), config.radii(), diagnostics
            )
    diagnostics["samples"] = len(points)
    return CheckResult("sing_inclusion", "holds", None, config.radii(), diagnostics)


def check_singular_pullback_equality(
    f: PolyMap, g: PolyMap, config: TamenessConfig = TamenessConfig()
) -> CheckResult:
    """Sing H equals F^{-1}(Sing G), by bidirectional sampling membership.

    Hypotheses: the discriminant evidence for f is OriginOnly and the origin
    is singular for g; both are hard preconditions and cannot be weakened.
    """
    disc = disc_evidence(f, config)
    if disc.verdict != "OriginOnly":
        raise PreconditionNotMet(
            "inner map needs an isolated critical value",
            f"disc evidence is {disc.verdict}",
        )
    sing_g = singular_set_ideal(g)
    if sing_g.is_trivially_empty() or not sing_g.vanishes_exact([0] * g.source_dim):
        raise PreconditionNotMet(
            "origin must be singular for the outer map", "rank of dG(0) is maximal"
        )
    h = compose(g, f)
    sing_h = singular_set_ideal(h)
    pulled = pullback_ideal(f, sing_g)
    sing_h_set = ConstructibleSet.variety(sing_h)
    pulled_set = ConstructibleSet.variety(pulled)
    forward, diag_f = _sample_variety(sing_h, config, 17, config.targets_per_radius)
    backward, diag_b = _sample_variety(pulled, config, 19, config.targets_per_radius)
    if not forward and not backward:
        return CheckResult("singular_pullback_equality", "vacuous")
    for pt in forward:
        if not pulled_set.member_float(pt, MEMBER_TOL):
            return CheckResult(
                "singular_pullback_equality", "fails", tuple(pt), config.radii()
            )
    for pt in backward:
        if not sing_h_set.member_float(pt, MEMBER_TOL):
            return CheckResult(
                "singular_pullback_equality", "fails", tuple(pt), config.radii()
            )
    return CheckResult(
        "singular_pullback_equality",
        "holds",
        None,
        config.radii(),
        {"forward": len(forward), "backward": len(backward)},
    )


def check_milnor_difference_inclusion(
    f: PolyMap, g: PolyMap, config: TamenessConfig = TamenessConfig()
) -> CheckResult:
    """M(H) \\ Sing H sits inside M(F); off the zero locus when 0 is singular for g."""
    disc = disc_evidence(f, config)
    if disc.verdict != "OriginOnly":
        raise PreconditionNotMet(
            "inner map needs an isolated critical value",
            f"disc evidence is {disc.verdict}",
        )
    h = compose(g, f)
    milnor_h = ConstructibleSet.variety(milnor_set_ideal(h))
    sing_h = ConstructibleSet.variety(singular_set_ideal(h))
    milnor_f_set = ConstructibleSet.variety(milnor_set_ideal(f))
    v_f_set = ConstructibleSet.variety(zero_locus_ideal(f))
    sing_g = singular_set_ideal(g)
    origin_singular = not sing_g.is_trivially_empty() and sing_g.vanishes_exact(
        [0] * g.source_dim
    )
    points: list[tuple[float, ...]] = []
    rngs = spawn_rngs(config.seed + 23, len(config.radii()))
    for radius, rng in zip(config.radii(), rngs):
        try:
            cloud = set_difference_samples(
                milnor_h, sing_h, radius, config.targets_per_radius,
                int(rng.integers(0, 2**31)), config.sampler,
            )
        except NoConvergence:
            continue
        points.extend(cloud.points)
    if not points:
        return CheckResult("milnor_difference_inclusion", "vacuous")
    for pt in points:
        if not milnor_f_set.member_float(pt, MEMBER_TOL):
            return CheckResult(
                "milnor_difference_inclusion", "fails", tuple(pt), config.radii()
            )
        if origin_singular and v_f_set.member_float(pt, MEMBER_TOL):
            return CheckResult(
                "milnor_difference_inclusion",
                "fails",
                tuple(pt),
                config.radii(),
                {"reason": "sample on the zero locus of the inner map"},
            )
    return CheckResult(
        "milnor_difference_inclusion",
        "holds",
        None,
        config.radii(),
        {"samples": len(points), "zero_locus_excluded": origin_singular},
    )


def check_diffeo_milnor_equality(
    f: PolyMap, g: PolyMap, config: TamenessConfig = TamenessConfig()
) -> CheckResult:
    """M(H) = M(F) when the outer map is a local diffeomorphism at 0."""
    if g.source_dim != g.target_dim:
        raise PreconditionNotMet(
            "outer map must be equidimensional", f"{g.source_dim} -> {g.target_dim}"
        )
    origin = [0] * g.source_dim
    det0 = determinant(jacobian(g)).evaluate_exact(origin)
    if det0 == 0:
        raise PreconditionNotMet(
            "outer map must be a local diffeomorphism at the origin",
            "det dG(0) = 0",
        )
    h = compose(g, f)
    milnor_h = milnor_set_ideal(h)
    milnor_f = milnor_set_ideal(f)
    set_h = ConstructibleSet.variety(milnor_h)
    set_f = ConstructibleSet.variety(milnor_f)
    side_h, _ = _sample_variety(milnor_h, config, 29, config.targets_per_radius)
    side_f, _ = _sample_variety(milnor_f, config, 37, config.targets_per_radius)
    if not side_h and not side_f:
        return CheckResult("diffeo_milnor_equality", "vacuous")
    for pt in side_h:
        if not set_f.member_float(pt, MEMBER_TOL):
            return CheckResult("diffeo_milnor_equality", "fails", tuple(pt), config.radii())
    for pt in side_f:
        if not set_h.member_float(pt, MEMBER_TOL):
            return CheckResult("diffeo_milnor_equality", "fails", tuple(pt), config.radii())
    return CheckResult(
        "diffeo_milnor_equality",
        "holds",
        None,
        config.radii(),
        {"forward": len(side_h), "backward": len(side_f)},
    )


def check_zero_locus_pullback(f: PolyMap, g: PolyMap) -> CheckResult:
    """V_H = F^{-1}(V_G): syntactic, since the pullback generators are H's components."""
    h = compose(g, f)
    lhs = zero_locus_ideal(h)
    rhs = pullback_ideal(f, zero_locus_ideal(g))
    status = "holds" if lhs.generators == rhs.generators else "fails"
    return CheckResult("zero_locus_pullback", status, detail={"route": "syntactic"})


# ---------------------------------------------------------------------------
# image clouds


def image_cloud(
    f: PolyMap,
    set_a: ConstructibleSet,
    set_b: ConstructibleSet,
    config: TamenessConfig = TamenessConfig(),
    radii: Sequence[float] | None = None,
    target_variables: Sequence[str] | None = None,
    count: int | None = None,
) -> SampleCloud:
    """Push sampled points of set_a minus set_b forward through f.

    The result lives in the target space and is the operational surrogate
    for the closure of f(set_a \\ set_b); the recorded radius is the largest
    source radius sampled.
    """
    radii = list(radii) if radii is not None else config.radii()
    count = count if count is not None else config.targets_per_radius * 2
    if target_variables is None:
        target_variables = tuple(f"y{i+1}" for i in range(f.target_dim))
    points: list[tuple[float, ...]] = []
    residuals: list[float] = []
    rngs = spawn_rngs(config.seed + 41, len(radii))
    for radius, rng in zip(radii, rngs):
        try:
            cloud = set_difference_samples(
                set_a, set_b, radius, count, int(rng.integers(0, 2**31)), config.sampler
            )
        except NoConvergence:
            continue
        for pt, res in zip(cloud.points, cloud.residuals):
            points.append(f.evaluate_float(pt))
            residuals.append(res)
    return SampleCloud(
        variables=tuple(target_variables),
        points=points,
        radius=max(radii),
        residuals=residuals,
        seed=config.seed,
        tol=config.sampler.tol,
        requested=count * len(radii),
    )


# ---------------------------------------------------------------------------
# full report


@dataclass
class CompositeReport:
    maps: dict
    sets: dict
    lattice_checks: list[CheckResult]
    disc: dict
    image_points: SampleCloud | None

    def to_dict(self) -> dict:
        return {
            "maps": self.maps,
            "sets": self.sets,
            "checks": [c.to_dict() for c in self.lattice_checks],
            "disc_evidence": self.disc,
            "image_cloud": None
            if self.image_points is None
            else {
                "variables": list(self.image_points.variables),
                "points": [list(p) for p in self.image_points.points],
                "source_radius_max": self.image_points.radius,
            },
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _ideal_strings(ideal: IdealGenerators) -> list[str]:
    return [str(g) for g in ideal.generators]


def analyze_pair(
    f: PolyMap, g: PolyMap, config: TamenessConfig = TamenessConfig()
) -> CompositeReport:
    """Run the whole composite picture for (F, G): sets, lattice, disc, image."""
    h = compose(g, f)
    sing_f, sing_g, sing_h = (
        singular_set_ideal(f), singular_set_ideal(g), singular_set_ideal(h)
    )
    milnor_f, milnor_g, milnor_h = (
        milnor_set_ideal(f), milnor_set_ideal(g), milnor_set_ideal(h)
    )
    checks = [check_sing_inclusion(f, g, config), check_zero_locus_pullback(f, g)]
    disc_f = disc_evidence(f, config)
    disc_g = disc_evidence(g, config)
    disc_h = disc_evidence(compose(g, f), config)
    sing_g_at_origin = not sing_g.is_trivially_empty() and sing_g.vanishes_exact(
        [0] * g.source_dim
    )
    if disc_f.verdict == "OriginOnly":
        if sing_g_at_origin:
            checks.append(check_singular_pullback_equality(f, g, config))
        checks.append(check_milnor_difference_inclusion(f, g, config))
    cloud = image_cloud(
        f,
        ConstructibleSet.variety(milnor_h),
        ConstructibleSet.variety(sing_h),
        config,
        target_variables=g.variables,
    )
    return CompositeReport(
        maps={"F": str(f), "G": str(g), "H": str(h),
              "source_variables": list(f.variables), "mid_variables": list(g.variables)},
        sets={
            "Sing_F": _ideal_strings(sing_f),
            "Sing_G": _ideal_strings(sing_g),
            "Sing_H": _ideal_strings(sing_h),
            "M_F": _ideal_strings(milnor_f),
            "M_G": _ideal_strings(milnor_g),
            "M_H": _ideal_strings(milnor_h),
            "V_F": _ideal_strings(zero_locus_ideal(f)),
            "V_G": _ideal_strings(zero_locus_ideal(g)),
            "V_H": _ideal_strings(zero_locus_ideal(h)),
        },
        lattice_checks=checks,
        disc={"F": disc_f.__dict__, "G": disc_g.__dict__, "H": disc_h.__dict__},
        image_points=cloud,
    )
