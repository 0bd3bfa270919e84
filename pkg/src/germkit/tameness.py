"""Tameness verdicts by accumulation search.

A germ is tame when the closure of its Milnor set minus the singular set
meets the singular set only at the origin.  The checker turns that germ
statement into a certified-heuristic search: sample candidate targets on the
singular set at a ladder of sphere radii, then try to drive feasible points
of the Milnor-minus-singular set arbitrarily close to a (refined) target
through a ladder of shrinking proximity rungs.  A target that survives the
full ladder is an accumulation witness (NotTame); targets whose best
distance plateaus safely above the witness scale are safe; anything else
leaves the verdict Inconclusive.

The same engine, pushed forward through the inner map of a composition,
evaluates the sharp composite criterion: the closure of F(M(H) \\ Sing H)
must meet Sing G only at the origin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import InvalidRho, NoConvergence, PreconditionNotMet
from .minors import (
    IdealGenerators,
    milnor_set_ideal,
    singular_set_ideal,
    validate_proper_rho,
)
from .poly import PolyMap, Polynomial, compose, euclidean_rho
from .sampling import (
    CompiledSystem,
    SamplerConfig,
    default_radius_ladder,
    gauss_newton,
    sample_on_sphere,
    spawn_rngs,
)
from .semialg import ConstructibleSet

TAME = "Tame"
NOT_TAME = "NotTame"
INCONCLUSIVE = "Inconclusive"

EXIT_CODES = {TAME: 0, NOT_TAME: 1, INCONCLUSIVE: 2, "PreconditionNotMet": 3}


@dataclass(frozen=True)
class TamenessConfig:
    """Ladders, margins and budgets for the accumulation search.

    The region below exclusion_radius is conceded to the germ: witnesses
    must accumulate at norm >= exclusion_radius.  Proximity rungs shrink
    from delta0 by halving for delta_rungs steps; a NotTame witness must
    complete every rung and finish below witness_tol.  A target is safe
    when its best-found distance stays at or above margin * radius, or
    plateaus strictly above witness_tol (recorded as a narrow margin).
    """

    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    radius_start: float = 0.2
    exclusion_radius: float = 0.02
    targets_per_radius: int = 10
    refine_top_k: int = 2
    delta0: float = 0.05
    delta_rungs: int = 12
    margin: float = 0.1
    witness_tol: float = 1e-5
    sep_ratio: float = 1e-2
    approach_ratio: float = 1e-3
    probe_starts: int = 12
    rung_starts: int = 16
    max_descent: int = 60
    target_sampling_starts: int = 16
    germ_ball: float = 0.25
    seed: int = 2024

    def radii(self) -> list[float]:
        return default_radius_ladder(self.radius_start, self.exclusion_radius)

    def deltas(self) -> list[float]:
        return [self.delta0 * 2.0**-j for j in range(self.delta_rungs + 1)]


@dataclass
class WitnessLadder:
    """Accumulation evidence: a target plus approach points per rung."""

    target: tuple[float, ...]
    target_radius: float
    rungs: list[dict]
    final_distance: float


@dataclass
class TargetEvidence:
    start: tuple[float, ...]
    refined: tuple[float, ...]
    radius: float
    best_distance: float
    rungs_completed: int
    classification: str  # witness | safe-margin | safe-floor | ambiguous | probe-safe


@dataclass
class TamenessVerdict:
    """Three-valued verdict plus the full evidence trail."""

    status: str
    witness: WitnessLadder | None
    evidence: dict
    config: dict

    def validate(self) -> None:
        """Machine-checkable soundness of the verdict's own evidence."""
        if self.status == NOT_TAME:
            if self.witness is None:
                raise AssertionError("NotTame verdict without witness")
            ex = self.config["exclusion_radius"]
            if math.dist(self.witness.target, [0.0] * len(self.witness.target)) < ex:
                raise AssertionError("witness accumulation point below exclusion radius")
            dists = [r["distance"] for r in self.witness.rungs]
            if any(b >= a for a, b in zip(dists, dists[1:])):
                raise AssertionError("witness ladder distances are not strictly decreasing")
            if self.witness.final_distance > self.config["witness_tol"]:
                raise AssertionError("witness final distance above witness_tol")
        if self.status == TAME and not self.evidence.get("vacuous"):
            for t in self.evidence.get("targets", []):
                if t["classification"] == "safe-margin" and t["best_distance"] < (
                    self.config["margin"] * t["radius"]
                ):
                    raise AssertionError("safe-margin target below margin")
                if t["classification"] in ("witness", "ambiguous"):
                    raise AssertionError(f"Tame verdict with a {t['classification']} target")

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "witness": None
            if self.witness is None
            else {
                "target": list(self.witness.target),
                "target_radius": self.witness.target_radius,
                "final_distance": self.witness.final_distance,
                "rungs": self.witness.rungs,
            },
            "evidence": self.evidence,
            "config": self.config,
        }


def _config_echo(config: TamenessConfig) -> dict:
    return {
        "radius_start": config.radius_start,
        "exclusion_radius": config.exclusion_radius,
        "delta0": config.delta0,
        "delta_rungs": config.delta_rungs,
        "margin": config.margin,
        "witness_tol": config.witness_tol,
        "sep_ratio": config.sep_ratio,
        "seed": config.seed,
        "tol": config.sampler.tol,
    }


# ---------------------------------------------------------------------------
# geometric engine


class _Engine:
    """Shared accumulation machinery for source-space and image-space runs.

    Approach points x live on {approach = 0} minus {excluded = 0} in source
    space; targets y live on {targets = 0} intersected with spheres, in the
    source space itself or, when `push` is given, in its target space.  The
    measured quantity is |push(x) - y|.
    """

    def __init__(
        self,
        approach: IdealGenerators,
        excluded: IdealGenerators,
        targets: IdealGenerators,
        push: PolyMap | None,
        config: TamenessConfig,
    ):
        self.approach = approach
        self.excluded = excluded
        self.targets = targets
        self.push = push
        self.config = config
        self.source_dim = len(approach.variables)
        self.target_dim = push.target_dim if push is not None else self.source_dim
        self.approach_sys = CompiledSystem(approach.generators)
        self.excluded_sys = CompiledSystem(excluded.generators)
        self.push_sys = (
            CompiledSystem(list(push.components)) if push is not None else None
        )
        self.flags: list[str] = []
        self.pool: list[np.ndarray] = []
        self.pool_images: list[np.ndarray] = []
        self._build_pool()

    def _build_pool(self) -> None:
        # Warm-start pool: sphere samples of the approach set with the
        # excluded set rejected.  Bootstraps the seek when the excluded set
        # contains the branch of the approach set nearest to a target.
        cfg = self.config
        sampler = replace(cfg.sampler, starts_per_point=24)
        a_set = ConstructibleSet.variety(self.approach)
        b_set = ConstructibleSet.variety(self.excluded)
        rngs = spawn_rngs(cfg.seed + 997, len(cfg.radii()))
        for radius, rng in zip(cfg.radii(), rngs):
            try:
                from .sampling import set_difference_samples

                cloud = set_difference_samples(
                    a_set, b_set, radius, 12, int(rng.integers(0, 2**31)), sampler
                )
            except NoConvergence:
                cloud = None
            if cloud is not None:
                for point in cloud.points:
                    self.pool.append(np.array(point))
            self.pool.extend(self._pinned_samples(radius, rng))
        self.pool_images = [self.push_value(x) for x in self.pool]

    def _pinned_samples(self, radius: float, rng) -> list[np.ndarray]:
        # Pin one coordinate away from zero and project onto the approach
        # equations restricted to that slice.  When the dominant excluded
        # branch is a coordinate hyperplane, the pin separates the start
        # from it and the projector must land on another branch.
        cfg = self.config
        found: list[np.ndarray] = []
        variables = self.approach.variables
        from fractions import Fraction

        for j, name in enumerate(variables):
            for sign in (1, -1):
                c = Fraction(sign * 35, 100) * Fraction(radius)
                pin = Polynomial.variable(variables, name) - Polynomial.constant(
                    variables, c
                )
                system = CompiledSystem(
                    list(self.approach.generators) + [pin], sphere_radius=radius
                )
                for _ in range(3):
                    x0 = radius * rng.standard_normal(self.source_dim)
                    x0 *= radius / max(float(np.linalg.norm(x0)), 1e-9)
                    x0[j] = float(c)
                    x = gauss_newton(system, x0, cfg.sampler, rng)
                    if x is None:
                        continue
                    if self.feasible(x, 0.01 * radius):
                        found.append(x)
        return found

    # -- basic geometry ----------------------------------------------------

    def push_value(self, x: np.ndarray) -> np.ndarray:
        if self.push_sys is None:
            return x
        return self.push_sys.residual(x)

    def push_jacobian(self, x: np.ndarray) -> np.ndarray:
        if self.push_sys is None:
            return np.eye(len(x))
        return self.push_sys.jacobian(x)

    @staticmethod
    def _estimate(system: CompiledSystem, x: np.ndarray, ambient_value: float) -> float:
        # First-order distance estimate |g(x)| / |grad g(x)|, maximized over
        # generators.  It tracks the true distance even when generators
        # vanish to high order along the variety.
        if system.n_eqs == 0:
            return ambient_value
        res = np.abs(system.residual(x))
        grads = system.jacobian(x)
        norms = np.maximum(np.linalg.norm(grads, axis=1), 1e-30)
        return float(np.max(res / norms))

    def off_excluded_distance(self, x: np.ndarray) -> float:
        """Estimated distance from x to the excluded variety (0 if ambient)."""
        if self.excluded.is_trivially_empty():
            return math.inf
        return self._estimate(self.excluded_sys, x, ambient_value=0.0)

    def on_approach_error(self, x: np.ndarray) -> float:
        """Estimated distance from x to the approach variety (0 if ambient)."""
        return self._estimate(self.approach_sys, x, ambient_value=0.0)

    def feasible(self, x: np.ndarray, sep_scale: float) -> bool:
        """Is x certifiably on the approach set and off the excluded set?

        Both sides scale with sep_scale (the proximity rung, or the claimed
        distance for probes): the off-excluded estimate must exceed
        sep_ratio * sep_scale while the on-approach error stays below
        approach_ratio * sep_scale.  The raw residual bound still applies.
        """
        if float(np.linalg.norm(x)) > self.config.germ_ball:
            return False
        res = self.approach_sys.residual(x)
        if res.size and float(np.max(np.abs(res))) > self.config.sampler.tol:
            return False
        if self.on_approach_error(x) > self.config.approach_ratio * sep_scale:
            return False
        return self.off_excluded_distance(x) >= self.config.sep_ratio * sep_scale

    def distance(self, x: np.ndarray, y: np.ndarray) -> float:
        return float(np.linalg.norm(self.push_value(x) - y))

    # -- tangent slide ------------------------------------------------------

    def slide(self, x: np.ndarray, y: np.ndarray, rng, iters: int = 12) -> list[np.ndarray]:
        """Descend |push(x) - y| along the approach variety.

        Returns the trajectory of improving iterates (starting point first);
        distances to y decrease strictly along it, so callers can pick the
        deepest iterate that still satisfies their separation requirement.
        """
        cfg = self.config.sampler
        best = x
        best_d = self.distance(x, y)
        trajectory = [x]
        for _ in range(iters):
            jac = self.approach_sys.jacobian(best)
            if jac.size:
                _, sing, vt = np.linalg.svd(jac)
                cutoff = (sing[0] if len(sing) else 0.0) * 1e-8 + 1e-30
                rank = int(np.sum(sing > cutoff))
                null = vt[rank:].T  # columns span the tangent space
            else:
                null = np.eye(len(best))
            if null.shape[1] == 0:
                break
            r = self.push_value(best) - y
            a_mat = self.push_jacobian(best) @ null
            dz = np.linalg.lstsq(a_mat, -r, rcond=None)[0]
            dx = null @ dz
            step, improved = 1.0, False
            for _ in range(20):
                raw = best + step * dx
                # Screen with the unprojected distance before paying for a
                # re-projection; tangent steps rarely help once this fails.
                if self.distance(raw, y) >= best_d * (1 + 1e-6) and step < 1.0:
                    step *= 0.5
                    continue
                cand = gauss_newton(self.approach_sys, raw, cfg, rng)
                if cand is not None:
                    d = self.distance(cand, y)
                    if d < best_d * (1 - 1e-9):
                        best, best_d, improved = cand, d, True
                        trajectory.append(cand)
                        break
                step *= 0.5
            if not improved:
                break
        return trajectory

    def constrained_slide(
        self, x: np.ndarray, y: np.ndarray, rng, delta: float | None, iters: int = 30
    ) -> tuple[np.ndarray, float]:
        """Sharpen a feasible approach point toward the feasibility boundary.

        Like slide, but a step is only accepted while the iterate stays
        feasible at the caller's separation scale, so the result converges
        to the closest admissible point rather than hopping onto the
        excluded branch.
        """
        cfg = self.config.sampler

        def sep_scale(d: float) -> float:
            return delta if delta is not None else max(d, self.config.witness_tol)

        best = x
        best_d = self.distance(x, y)
        for _ in range(iters):
            jac = self.approach_sys.jacobian(best)
            if jac.size:
                _, sing, vt = np.linalg.svd(jac)
                cutoff = (sing[0] if len(sing) else 0.0) * 1e-8 + 1e-30
                rank = int(np.sum(sing > cutoff))
                null = vt[rank:].T
            else:
                null = np.eye(len(best))
            if null.shape[1] == 0:
                break
            r = self.push_value(best) - y
            a_mat = self.push_jacobian(best) @ null
            dz = np.linalg.lstsq(a_mat, -r, rcond=None)[0]
            dx = null @ dz
            step, improved = 1.0, False
            for _ in range(25):
                raw = best + step * dx
                if self.distance(raw, y) >= best_d * (1 + 1e-6) and step < 1.0:
                    step *= 0.5
                    continue
                cand = gauss_newton(self.approach_sys, raw, cfg, rng)
                if cand is not None:
                    d = self.distance(cand, y)
                    if d < best_d * (1 - 1e-12) and self.feasible(cand, sep_scale(d)):
                        best, best_d, improved = cand, d, True
                        break
                step *= 0.5
            if not improved:
                break
        return best, best_d

    # -- approach search -----------------------------------------------------

    def seek(
        self,
        y: np.ndarray,
        delta: float | None,
        rng,
        warm: list[np.ndarray],
        starts: int,
        scale_hint: float | None = None,
    ) -> tuple[np.ndarray, float] | None:
        """Best feasible approach point for target y.

        When delta is given, starts are drawn at that scale and only points
        within delta (after a slide) matter; with delta=None this is a probe
        for the unconstrained best distance, at scale_hint if the caller
        already knows roughly how far the approach set sits.
        """
        cfg = self.config.sampler
        if delta is not None:
            scale_base = delta
        elif scale_hint is not None:
            scale_base = max(scale_hint, 0.1 * self.config.witness_tol)
        else:
            scale_base = max(float(np.linalg.norm(y)), 0.05)
        best: tuple[np.ndarray, float] | None = None
        candidates: list[np.ndarray] = []
        for w in warm:
            candidates.append(w.copy())
            candidates.append(w + 0.3 * scale_base * rng.standard_normal(self.source_dim))
        if self.pool:
            # Nearest warm-pool members by (pushed) distance to the target.
            order = sorted(
                range(len(self.pool)),
                key=lambda i: float(np.linalg.norm(self.pool_images[i] - y)),
            )
            for i in order[:4]:
                candidates.append(self.pool[i].copy())
        for k in range(starts):
            scale = scale_base * (0.5 ** (k % 4)) * (0.5 + rng.random())
            if self.push is None:
                candidates.append(y + scale * rng.standard_normal(self.source_dim))
            else:
                # Image-space target: start from source points near the germ
                # ball at assorted scales.
                base = warm[k % len(warm)] if warm else None
                if base is None:
                    candidates.append(
                        0.5 * self.config.germ_ball * rng.standard_normal(self.source_dim)
                    )
                else:
                    candidates.append(base + scale * rng.standard_normal(self.source_dim))
        for x0 in candidates:
            x = gauss_newton(self.approach_sys, x0, cfg, rng)
            if x is None:
                continue
            trajectory = self.slide(x, y, rng)
            # Deepest feasible iterate seeds a constrained slide; distances
            # decrease along the trajectory, and the separation scale never
            # shrinks with the achieved distance (a rung uses its own delta,
            # a probe the claimed distance itself).
            seed = None
            for cand in reversed(trajectory):
                d = self.distance(cand, y)
                sep_scale = delta if delta is not None else max(d, self.config.witness_tol)
                if self.feasible(cand, sep_scale):
                    seed = (cand, d)
                    break
            if seed is None:
                continue
            cand, d = self.constrained_slide(seed[0], y, rng, delta)
            if d > seed[1]:
                cand, d = seed
            if best is None or d < best[1]:
                best = (cand, d)
        return best

    def refine_target(self, y: np.ndarray, x: np.ndarray, radius: float, rng) -> np.ndarray:
        """Move the target along {targets, |y| = radius} toward push(x)."""
        system = CompiledSystem(list(self.targets.generators), sphere_radius=radius)
        goal = self.push_value(x)
        for blend in (1.0, 0.5, 0.25):
            start = y + blend * (goal - y)
            cand = gauss_newton(system, start, self.config.sampler, rng)
            if cand is not None:
                return cand
        return y

    # -- per-target classification --------------------------------------------

    def run_target(
        self, y0: np.ndarray, radius: float, rng
    ) -> tuple[TargetEvidence, list[dict]]:
        cfg = self.config
        y = y0.copy()
        warm: list[np.ndarray] = []
        # Descent phase: alternate the approach seek with target refinement
        # along {targets} on the fixed sphere, until the distance stops
        # improving (a plateau) or reaches the witness scale.
        d_hist: list[float] = []
        best_d = math.inf
        best_y = y.copy()
        for it in range(cfg.max_descent):
            starts = cfg.probe_starts if it == 0 else max(6, cfg.probe_starts // 2)
            hint = 3.0 * d_hist[-1] if d_hist else None
            found = self.seek(y, None, rng, warm, starts, scale_hint=hint)
            if found is None:
                break
            x, d = found
            warm = [x]
            if d < best_d:
                best_d, best_y = d, y.copy()
            d_hist.append(d)
            if d <= 0.5 * cfg.witness_tol:
                break
            if len(d_hist) >= 6 and d > 0.7 * d_hist[-6]:
                break
            y = self.refine_target(y, x, radius, rng)
        y = best_y
        # Evidence phase: the proximity ladder at the refined target.
        ladder: list[dict] = []
        rungs_done = 0
        for delta in cfg.deltas():
            found = self.seek(y, delta, rng, warm, cfg.rung_starts)
            if found is None or found[1] > delta:
                break
            x, d = found
            best_d = min(best_d, d)
            ladder.append(
                {"delta": delta, "distance": d, "point": [float(v) for v in x]}
            )
            warm = [x]
            rungs_done += 1
        completed_all = rungs_done == len(cfg.deltas())
        if completed_all and best_d <= cfg.witness_tol:
            classification = "witness"
        elif best_d >= cfg.margin * radius:
            classification = "safe-margin"
        elif best_d > cfg.witness_tol:
            classification = "safe-floor"
        else:
            classification = "ambiguous"
        return TargetEvidence(
            start=tuple(float(v) for v in y0),
            refined=tuple(float(v) for v in y),
            radius=radius,
            best_distance=best_d,
            rungs_completed=rungs_done,
            classification=classification,
        ), ladder

    # -- full run -----------------------------------------------------------------

    def run(self) -> TamenessVerdict:
        cfg = self.config
        config_echo = _config_echo(cfg)
        radii = cfg.radii()
        evidence: dict = {"radii": radii, "targets": [], "flags": self.flags}

        if self.approach.is_trivially_empty():
            self.flags.append("approach-set-empty")
            evidence["vacuous"] = True
            return TamenessVerdict(TAME, None, evidence, config_echo)

        target_set = ConstructibleSet.variety(self.targets)
        if self.targets.is_trivially_empty():
            self.flags.append("target-set-empty")
            evidence["vacuous"] = True
            return TamenessVerdict(TAME, None, evidence, config_echo)

        rngs = spawn_rngs(cfg.seed, len(radii) + 1)
        samples: list[tuple[float, np.ndarray]] = []
        empty_confident = True
        target_sampler = replace(cfg.sampler, starts_per_point=cfg.target_sampling_starts)
        for radius, rng in zip(radii, rngs):
            sub = int(rng.integers(0, 2**31))
            try:
                cloud = sample_on_sphere(
                    target_set, radius, cfg.targets_per_radius, sub, target_sampler
                )
            except NoConvergence as err:
                best = err.diagnostics.get("best_residual", math.inf)
                if best <= 1e3 * cfg.sampler.tol:
                    empty_confident = False
                continue
            empty_confident = False
            for point in cloud.points:
                samples.append((radius, np.array(point)))

        if not samples:
            if empty_confident:
                # No target anywhere on the ladder: the set of candidate
                # accumulation points is confined to the conceded ball.
                self.flags.append("vacuous-no-targets")
                evidence["vacuous"] = True
                return TamenessVerdict(TAME, None, evidence, config_echo)
            self.flags.append("target-sampling-starved")
            return TamenessVerdict(INCONCLUSIVE, None, evidence, config_echo)

        work_rng = rngs[-1]
        probes: list[tuple[float, float, np.ndarray]] = []
        for radius, y in samples:
            found = self.seek(y, None, work_rng, [], cfg.probe_starts)
            probes.append((found[1] if found is not None else math.inf, radius, y))

        # Refine every margin-breaker plus the closest few per radius.
        chosen: list[tuple[float, np.ndarray]] = []
        for radius in radii:
            at_radius = sorted(
                (p for p in probes if p[1] == radius), key=lambda p: p[0]
            )
            for rank, (dist, _, y) in enumerate(at_radius):
                if rank < cfg.refine_top_k or dist < cfg.margin * radius:
                    chosen.append((radius, y))
                else:
                    evidence["targets"].append(
                        TargetEvidence(
                            start=tuple(float(v) for v in y),
                            refined=tuple(float(v) for v in y),
                            radius=radius,
                            best_distance=dist,
                            rungs_completed=0,
                            classification="probe-safe"
                            if dist >= cfg.margin * radius
                            else "ambiguous",
                        ).__dict__
                    )

        witness: WitnessLadder | None = None
        classifications = [t["classification"] for t in evidence["targets"]]
        for radius, y in chosen:
            target_evidence, ladder = self.run_target(y, radius, work_rng)
            evidence["targets"].append(target_evidence.__dict__)
            classifications.append(target_evidence.classification)
            if target_evidence.classification == "witness":
                strict_rungs: list[dict] = []
                running = math.inf
                for rung in ladder:
                    if rung["distance"] < running:
                        running = rung["distance"]
                        strict_rungs.append(rung)
                cand = WitnessLadder(
                    target=target_evidence.refined,
                    target_radius=radius,
                    rungs=strict_rungs,
                    final_distance=running,
                )
                if witness is None or cand.final_distance < witness.final_distance:
                    witness = cand

        per_radius: dict[float, float] = {}
        for t in evidence["targets"]:
            r = t["radius"]
            rel = t["best_distance"] / r if math.isfinite(t["best_distance"]) else math.inf
            per_radius[r] = min(per_radius.get(r, math.inf), rel)
        evidence["min_relative_distance_by_radius"] = {
            str(r): (v if math.isfinite(v) else None) for r, v in per_radius.items()
        }

        if witness is not None:
            return TamenessVerdict(NOT_TAME, witness, evidence, config_echo)
        if classifications and all(
            c in ("safe-margin", "safe-floor", "probe-safe") for c in classifications
        ):
            if any(c == "safe-floor" for c in classifications):
                self.flags.append("narrow-margin")
            return TamenessVerdict(TAME, None, evidence, config_echo)
        self.flags.append("mixed-evidence")
        return TamenessVerdict(INCONCLUSIVE, None, evidence, config_echo)


# ---------------------------------------------------------------------------
# public checks


def check_tame(
    f: PolyMap,
    rho: Polynomial | None = None,
    config: TamenessConfig = TamenessConfig(),
    *,
    rho_is_pullback: bool = False,
) -> TamenessVerdict:
    """Decide tameness of a germ with respect to rho (default Euclidean).

    NotTame verdicts carry an accumulation witness: a point of the singular
    set at norm >= exclusion_radius approached through the full proximity
    ladder by feasible points of the Milnor set that avoid the singular set.
    """
    if rho is None:
        rho = euclidean_rho(f.variables)
    elif not rho_is_pullback:
        try:
            validate_proper_rho(rho)
        except InvalidRho:
            raise
    sing = singular_set_ideal(f)
    milnor = milnor_set_ideal(f, rho)
    engine = _Engine(milnor, sing, sing, push=None, config=config)
    return engine.run()


def check_composite_condition(
    f: PolyMap,
    g: PolyMap,
    config: TamenessConfig = TamenessConfig(),
    *,
    cross_validate: bool = True,
) -> TamenessVerdict:
    """Tameness of H = g o f via the sharp image criterion.

    Requires f tame, discriminant evidence for f concentrated at the origin,
    and the origin singular for g; then H is tame iff the closure of
    F(M(H) \\ Sing H) meets Sing G only at the origin.  When the direct
    check of H also reaches a definite status the two must agree.
    """
    from .composite import disc_evidence  # local import to avoid a cycle

    f_verdict = check_tame(f, None, config)
    if f_verdict.status != TAME:
        raise PreconditionNotMet(
            "inner map must be tame", f"check_tame(F) returned {f_verdict.status}"
        )
    disc = disc_evidence(f, config)
    if disc.verdict != "OriginOnly":
        raise PreconditionNotMet(
            "inner map needs an isolated critical value", f"disc evidence is {disc.verdict}"
        )
    sing_g = singular_set_ideal(g)
    if sing_g.is_trivially_empty() or not sing_g.vanishes_exact(
        [0] * g.source_dim
    ):
        raise PreconditionNotMet(
            "origin must be singular for the outer map",
            "rank of dG(0) is maximal",
        )
    h = compose(g, f)
    milnor_h = milnor_set_ideal(h)
    sing_h = singular_set_ideal(h)
    engine = _Engine(milnor_h, sing_h, sing_g, push=f, config=config)
    verdict = engine.run()
    if cross_validate:
        direct = check_tame(h, None, config)
        verdict.evidence["direct_check"] = direct.status
        if direct.status != INCONCLUSIVE and verdict.status != INCONCLUSIVE:
            if direct.status != verdict.status:
                raise AssertionError(
                    "composite criterion disagrees with the direct check: "
                    f"{verdict.status} vs {direct.status}"
                )
    return verdict


@dataclass
class InclusionReport:
    status: str  # holds | fails | vacuous
    witness: tuple[float, ...] | None
    derived_verdict: str | None
    equality_holds: bool | None
    detail: dict


def check_sufficient_inclusion(
    f: PolyMap,
    g: PolyMap,
    config: TamenessConfig = TamenessConfig(),
    *,
    check_equality: bool = False,
) -> InclusionReport:
    """Sampling check of F(M(H)) inside M(G), with the derived sufficiency.

    When the inclusion holds and g is tame, H is tame by the sufficient
    criterion; with bidirectional equality the conclusion upgrades to an
    equivalence between tameness of g and of H.
    """
    from .composite import disc_evidence  # local import to avoid a cycle

    f_verdict = check_tame(f, None, config)
    if f_verdict.status != TAME:
        raise PreconditionNotMet(
            "inner map must be tame", f"check_tame(F) returned {f_verdict.status}"
        )
    disc = disc_evidence(f, config)
    if disc.verdict != "OriginOnly":
        raise PreconditionNotMet(
            "inner map needs an isolated critical value", f"disc evidence is {disc.verdict}"
        )
    h = compose(g, f)
    milnor_h = ConstructibleSet.variety(milnor_set_ideal(h))
    milnor_g = milnor_set_ideal(g)
    milnor_g_sys = CompiledSystem(list(milnor_g.generators))
    member_tol = 1e-8
    rngs = spawn_rngs(config.seed + 77, len(config.radii()))
    witness = None
    sampled = 0
    for radius, rng in zip(config.radii(), rngs):
        try:
            cloud = sample_on_sphere(
                milnor_h, radius, config.targets_per_radius * 2,
                int(rng.integers(0, 2**31)), config.sampler,
            )
        except NoConvergence:
            continue
        for point in cloud.points:
            sampled += 1
            image = f.evaluate_float(point)
            res = milnor_g_sys.residual(np.array(image))
            if res.size and float(np.max(np.abs(res))) > member_tol:
                witness = tuple(float(v) for v in point)
                break
        if witness is not None:
            break
    if sampled == 0:
        return InclusionReport("vacuous", None, None, None, {"sampled": 0})
    if witness is not None:
        return InclusionReport("fails", witness, None, None, {"sampled": sampled})
    derived = None
    g_verdict = check_tame(g, None, config)
    if g_verdict.status == TAME:
        derived = "H tame by the sufficient inclusion"
    equality = None
    if check_equality:
        equality = _reverse_inclusion_holds(f, milnor_g, milnor_set_ideal(h), config)
    return InclusionReport("holds", None, derived, equality, {"sampled": sampled})


def _reverse_inclusion_holds(
    f: PolyMap, milnor_g: IdealGenerators, milnor_h: IdealGenerators, config: TamenessConfig
) -> bool:
    """Every sampled point of M(G) is approximately an F-image of M(H)."""
    engine = _Engine(
        milnor_h,
        IdealGenerators(milnor_h.variables, (Polynomial.constant(milnor_h.variables, 1),)),
        milnor_g,
        push=f,
        config=config,
    )
    target_set = ConstructibleSet.variety(milnor_g)
    rngs = spawn_rngs(config.seed + 101, len(config.radii()) + 1)
    work = rngs[-1]
    for radius, rng in zip(config.radii(), rngs):
        try:
            cloud = sample_on_sphere(
                target_set, radius, 6, int(rng.integers(0, 2**31)), config.sampler
            )
        except NoConvergence:
            continue
        for point in cloud.points:
            found = engine.seek(np.array(point), None, work, [], config.probe_starts)
            if found is None or found[1] > 1e-6:
                return False
    return True


@dataclass
class IcisReport:
    """Evidence that the singular set meets the zero locus only at 0."""

    holds: bool | None  # None = inconclusive
    witness: tuple[float, ...] | None
    detail: dict


def check_icis(f: PolyMap, config: TamenessConfig = TamenessConfig()) -> IcisReport:
    """Check Sing f intersect V_f inside {0} near the origin by sampling."""
    sing = singular_set_ideal(f)
    if sing.is_trivially_empty():
        return IcisReport(True, None, {"reason": "singular set empty"})
    combined = IdealGenerators.from_polynomials(
        f.variables, list(sing.generators) + list(f.components)
    )
    target = ConstructibleSet.variety(combined)
    rngs = spawn_rngs(config.seed + 31, len(config.radii()))
    starved = False
    for radius, rng in zip(config.radii(), rngs):
        try:
            cloud = sample_on_sphere(
                target, radius, config.targets_per_radius,
                int(rng.integers(0, 2**31)), config.sampler,
            )
        except NoConvergence as err:
            best = err.diagnostics.get("best_residual", math.inf)
            if best <= 1e3 * config.sampler.tol:
                starved = True
            continue
        if cloud.points:
            return IcisReport(
                False, cloud.points[0], {"radius": radius, "count": len(cloud)}
            )
    if starved:
        return IcisReport(None, None, {"reason": "sampling starved"})
    return IcisReport(True, None, {"reason": "no intersection points on the ladder"})
