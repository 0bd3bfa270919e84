"""Numeric sampling of constructible sets near the origin.

Points are produced by damped Gauss-Newton projection onto a piece's
equations (optionally intersected with a sphere), started from seeded
random directions.  All randomness flows through numpy Generators derived
from one seed by a splittable scheme, so identical (seed, config) inputs
reproduce identical clouds bit for bit.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np
from numba import njit

from .errors import NoConvergence
from .poly import Polynomial
from .semialg import BasicPiece, ConstructibleSet


@dataclass(frozen=True)
class SamplerConfig:
    """Numeric knobs for projection and acceptance.

    tol is the equation-residual acceptance bound, sep_tol the inequation
    separation, cluster_radius_factor scales the dedup radius by the sphere
    radius.  Newton damping halves the step up to max_halvings times within
    each of max_iter iterations; a sampling run spends at most
    starts_per_point * count starts.
    """

    tol: float = 1e-10
    sep_tol: float = 1e-6
    reject_tol: float = 1e-8
    cluster_radius_factor: float = 1e-3
    max_iter: int = 80
    max_halvings: int = 30
    starts_per_point: int = 64


def default_radius_ladder(start: float = 0.2, floor: float = 0.02) -> list[float]:
    """Halving radii from start down to (but not below) floor."""
    radii = []
    r = start
    while r >= floor:
        radii.append(r)
        r /= 2
    return radii


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """Split one seed into independent child generators (order-stable)."""
    return [np.random.Generator(np.random.PCG64(s)) for s in np.random.SeedSequence(seed).spawn(count)]


# ---------------------------------------------------------------------------
# compiled evaluation


class CompiledPoly:
    """A polynomial flattened to exponent/coefficient arrays for numpy."""

    __slots__ = ("exps", "coeffs", "nvars")

    def __init__(self, p: Polynomial):
        nvars = len(p.variables)
        if p.terms:
            self.exps = np.array(list(p.terms.keys()), dtype=np.int64)
            self.coeffs = np.array([float(c) for c in p.terms.values()])
        else:
            self.exps = np.zeros((0, nvars), dtype=np.int64)
            self.coeffs = np.zeros(0)
        self.nvars = nvars

    def value(self, x: np.ndarray) -> float:
        if not len(self.coeffs):
            return 0.0
        return float(np.prod(x[None, :] ** self.exps, axis=1) @ self.coeffs)


@njit(cache=True)
def _eval_residual(x, exps, coeffs, slots, n_eqs, sphere_r2, has_sphere):
    n_out = n_eqs + (1 if has_sphere else 0)
    out = np.zeros(n_out)
    for t in range(exps.shape[0]):
        term = coeffs[t]
        for j in range(exps.shape[1]):
            e = exps[t, j]
            if e == 1:
                term *= x[j]
            elif e > 1:
                term *= x[j] ** np.int64(e)
        out[slots[t]] += term
    if has_sphere:
        s = 0.0
        for j in range(x.shape[0]):
            s += x[j] * x[j]
        out[n_eqs] = s - sphere_r2
    return out


@njit(cache=True)
def _eval_jacobian(x, jexps, jcoeffs, jslots, n_eqs, nvars, has_sphere):
    n_rows = n_eqs + (1 if has_sphere else 0)
    out = np.zeros((n_rows, nvars))
    flat = out.reshape(n_rows * nvars)
    for t in range(jexps.shape[0]):
        term = jcoeffs[t]
        for j in range(jexps.shape[1]):
            e = jexps[t, j]
            if e == 1:
                term *= x[j]
            elif e > 1:
                term *= x[j] ** np.int64(e)
        flat[jslots[t]] += term
    if has_sphere:
        for j in range(nvars):
            out[n_eqs, j] = 2.0 * x[j]
    return out


@njit(cache=True)
def _gn_core(
    x0, exps, coeffs, slots, jexps, jcoeffs, jslots, n_eqs, nvars,
    sphere_r2, has_sphere, tol, max_iter, max_halvings, polish_iters,
):
    # Damped Gauss-Newton with a polish phase; returns (x, max-residual,
    # stalled flag).  Stalled means no step improved while above tol.
    x = x0.copy()
    r = _eval_residual(x, exps, coeffs, slots, n_eqs, sphere_r2, has_sphere)
    fx = 0.0
    for i in range(r.shape[0]):
        a = abs(r[i])
        if a > fx:
            fx = a
    polish_left = polish_iters
    deep = tol * 1e-4
    for _ in range(max_iter + polish_iters):
        if fx <= tol:
            if polish_left <= 0 or fx <= deep:
                return x, fx, False
            polish_left -= 1
        jac = _eval_jacobian(x, jexps, jcoeffs, jslots, n_eqs, nvars, has_sphere)
        ok = True
        for i in range(jac.shape[0]):
            for j in range(jac.shape[1]):
                if not np.isfinite(jac[i, j]):
                    ok = False
        for i in range(r.shape[0]):
            if not np.isfinite(r[i]):
                ok = False
        if not ok:
            return x, fx, False
        dx = np.linalg.lstsq(jac, -r)[0]
        step = 1.0
        moved = False
        for _ in range(max_halvings):
            xn = x + step * dx
            rn = _eval_residual(xn, exps, coeffs, slots, n_eqs, sphere_r2, has_sphere)
            fn = 0.0
            finite = True
            for i in range(rn.shape[0]):
                a = abs(rn[i])
                if not np.isfinite(a):
                    finite = False
                    break
                if a > fn:
                    fn = a
            if finite and fn < fx:
                x, r, fx = xn, rn, fn
                moved = True
                break
            step *= 0.5
        if not moved:
            return x, fx, fx > tol
    return x, fx, fx > tol


class CompiledSystem:
    """Equations (plus optional sphere constraint) with their Jacobian.

    All equations' monomials are stacked into flat exponent/coefficient
    arrays evaluated by jit-compiled kernels, so a residual or Jacobian
    evaluation costs microseconds regardless of generator count.
    """

    def __init__(self, equations: Sequence[Polynomial], sphere_radius: float | None = None):
        equations = list(equations)
        self.polys = [CompiledPoly(p) for p in equations]
        self.n_eqs = len(equations)
        self.sphere_radius = sphere_radius
        self.nvars = len(equations[0].variables) if equations else None
        nvars = self.nvars or 0
        # Stacked residual terms: row r of exps belongs to equation slot[r].
        exps, coeffs, slots = [], [], []
        jexps, jcoeffs, jslots = [], [], []
        for i, p in enumerate(equations):
            for e, c in p.terms.items():
                exps.append(e)
                coeffs.append(float(c))
                slots.append(i)
                for j, ej in enumerate(e):
                    if ej:
                        d = list(e)
                        d[j] = ej - 1
                        jexps.append(tuple(d))
                        jcoeffs.append(float(c) * ej)
                        jslots.append(i * nvars + j)
        self._exps = np.array(exps, dtype=np.int64) if exps else np.zeros((0, nvars), dtype=np.int64)
        self._coeffs = np.array(coeffs)
        self._slots = np.array(slots, dtype=np.int64)
        self._jexps = np.array(jexps, dtype=np.int64) if jexps else np.zeros((0, nvars), dtype=np.int64)
        self._jcoeffs = np.array(jcoeffs)
        self._jslots = np.array(jslots, dtype=np.int64)

    def _sphere_args(self) -> tuple[float, bool]:
        if self.sphere_radius is None:
            return 0.0, False
        return float(self.sphere_radius) ** 2, True

    def residual(self, x: np.ndarray) -> np.ndarray:
        r2, has_sphere = self._sphere_args()
        return _eval_residual(
            np.asarray(x, dtype=float), self._exps, self._coeffs, self._slots,
            self.n_eqs, r2, has_sphere,
        )

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        r2, has_sphere = self._sphere_args()
        return _eval_jacobian(
            x, self._jexps, self._jcoeffs, self._jslots, self.n_eqs, len(x), has_sphere
        )


def gauss_newton(
    system: CompiledSystem,
    x0: np.ndarray,
    config: SamplerConfig,
    rng: np.random.Generator | None = None,
    polish_iters: int = 25,
) -> np.ndarray | None:
    """Damped least-squares projection onto {system = 0}.

    Returns the converged point (max |residual| <= tol) or None.  Once below
    tol, iteration continues while the residual keeps improving markedly:
    generators that vanish to high order need the extra polish so that
    first-order distance estimates at the result stay honest.  When the
    Jacobian degenerates (cones through the apex, repeated factors) the
    projector falls back to random-direction descent, which only needs
    residual decrease.
    """
    x = np.asarray(x0, dtype=float).copy()
    if system.n_eqs == 0 and system.sphere_radius is None:
        return x
    r2, has_sphere = system._sphere_args()
    scale = max(1.0, float(np.linalg.norm(x)))
    for attempt in range(4):
        x, fx, stalled = _gn_core(
            x, system._exps, system._coeffs, system._slots,
            system._jexps, system._jcoeffs, system._jslots,
            system.n_eqs, len(x), r2, has_sphere,
            config.tol, config.max_iter, config.max_halvings, polish_iters,
        )
        if fx <= config.tol:
            return x
        if not stalled or rng is None:
            return None
        # Random-direction descent for degenerate Jacobians, then retry.
        nudged = False
        for _ in range(8):
            d = rng.standard_normal(len(x))
            d *= (1e-3 * scale) / np.linalg.norm(d)
            xn = x + d
            rn = system.residual(xn)
            fn = float(np.max(np.abs(rn))) if rn.size else 0.0
            if np.all(np.isfinite(rn)) and fn < fx:
                x = xn
                nudged = True
                break
        if not nudged:
            return None
    return None


# ---------------------------------------------------------------------------
# sample clouds


@dataclass
class SampleCloud:
    """Accepted points with their residuals and the sampling provenance."""

    variables: tuple[str, ...]
    points: list[tuple[float, ...]]
    radius: float
    residuals: list[float]
    seed: int
    tol: float
    requested: int = 0

    def __len__(self) -> int:
        return len(self.points)

    def as_array(self) -> np.ndarray:
        return np.array(self.points) if self.points else np.zeros((0, len(self.variables)))

    def write_csv(self, path: str | Path) -> Path:
        """CSV of points plus a JSON sidecar with the sampling metadata."""
        path = Path(path)
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(self.variables)
            for point in self.points:
                writer.writerow([f"{v:.17g}" for v in point])
        sidecar = {
            "radius": self.radius,
            "seed": self.seed,
            "tol": self.tol,
            "count": len(self.points),
            "requested": self.requested,
            "residual_max": max(self.residuals, default=0.0),
            "residual_mean": (sum(self.residuals) / len(self.residuals)) if self.residuals else 0.0,
        }
        path.with_name(path.name + ".json").write_text(json.dumps(sidecar, indent=2))
        return path


def _unit_direction(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim)
    n = np.linalg.norm(v)
    while n < 1e-12:  # pragma: no cover - astronomically unlikely
        v = rng.standard_normal(dim)
        n = np.linalg.norm(v)
    return v / n


def _dedupe(points: list[np.ndarray], cluster_radius: float) -> list[np.ndarray]:
    kept: list[np.ndarray] = []
    for p in points:
        if all(np.linalg.norm(p - q) > cluster_radius for q in kept):
            kept.append(p)
    return kept


def sample_on_sphere(
    cset: ConstructibleSet,
    radius: float,
    count: int,
    seed: int,
    config: SamplerConfig = SamplerConfig(),
) -> SampleCloud:
    """Sample the set intersected with the sphere of the given radius.

    Raises NoConvergence when no start is accepted; the diagnostics
    distinguish "projection never converged" from "converged points were
    all rejected by the inequations".
    """
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    dim = len(cset.variables)
    diagnostics = {"starts": 0, "converged": 0, "separation_rejects": 0, "best_residual": math.inf}
    per_piece: list[list[np.ndarray]] = []
    pieces = list(cset.pieces)
    if pieces:
        budget = config.starts_per_point * count
        rngs = spawn_rngs(seed, len(pieces))
        for piece, rng in zip(pieces, rngs):
            system = CompiledSystem(piece.equations, sphere_radius=radius)
            ineqs = [CompiledPoly(q) for q in piece.inequations]
            piece_budget = max(1, budget // len(pieces))
            found: list[np.ndarray] = []
            for _ in range(piece_budget):
                if len(found) >= count:
                    break
                diagnostics["starts"] += 1
                x0 = radius * _unit_direction(rng, dim)
                x = gauss_newton(system, x0, config, rng)
                if x is None:
                    continue
                res = float(np.max(np.abs(system.residual(x)))) if piece.equations else abs(
                    float(x @ x) - radius**2
                )
                diagnostics["converged"] += 1
                diagnostics["best_residual"] = min(diagnostics["best_residual"], res)
                if any(abs(q.value(x)) <= config.sep_tol for q in ineqs):
                    diagnostics["separation_rejects"] += 1
                    continue
                found.append(x)
            per_piece.append(found)
    # Interleave pieces so truncation keeps every nonempty branch represented.
    accepted: list[np.ndarray] = []
    for rank in range(max((len(f) for f in per_piece), default=0)):
        for found in per_piece:
            if rank < len(found):
                accepted.append(found[rank])
    if not accepted:
        raise NoConvergence(
            f"no accepted points on the radius-{radius} slice", diagnostics
        )
    cluster_radius = radius * config.cluster_radius_factor
    unique = _dedupe(accepted, cluster_radius)[:count]
    residuals: list[float] = []
    eval_sets = [CompiledSystem(piece.equations) for piece in pieces]
    for x in unique:
        residuals.append(
            min(
                (float(np.max(np.abs(s.residual(x)))) if s.polys else 0.0)
                for s in eval_sets
            )
        )
    return SampleCloud(
        variables=cset.variables,
        points=[tuple(map(float, x)) for x in unique],
        radius=radius,
        residuals=residuals,
        seed=seed,
        tol=config.tol,
        requested=count,
    )


def set_difference_samples(
    a: ConstructibleSet,
    b: ConstructibleSet,
    radius: float,
    count: int,
    seed: int,
    config: SamplerConfig = SamplerConfig(),
) -> SampleCloud:
    """Sample a, then drop points that are tolerance-members of b."""
    cloud = sample_on_sphere(a, radius, count, seed, config)
    kept_points, kept_res = [], []
    for point, res in zip(cloud.points, cloud.residuals):
        if not b.member_float(point, config.reject_tol):
            kept_points.append(point)
            kept_res.append(res)
    return SampleCloud(
        variables=cloud.variables,
        points=kept_points,
        radius=radius,
        residuals=kept_res,
        seed=seed,
        tol=config.tol,
        requested=count,
    )


def nearest_distance(
    cset: ConstructibleSet,
    target: Sequence[float],
    config: SamplerConfig = SamplerConfig(),
    seed: int = 0,
    max_starts: int = 128,
) -> float:
    """Best found Euclidean distance from the target to the set.

    Multi-start projection from perturbations of the target at shrinking
    scales; the result is an upper bound on the true distance and is
    monotone non-increasing in max_starts.
    """
    target = np.asarray(target, dtype=float)
    if not np.all(np.isfinite(target)):
        raise ValueError("target must be finite")
    best = math.inf
    attempts = 0
    pieces = list(cset.pieces)
    if not pieces:
        raise NoConvergence("the set is empty", {"starts": 0})
    rngs = spawn_rngs(seed, len(pieces))
    scale0 = max(1.0, float(np.linalg.norm(target)))
    for piece, rng in zip(pieces, rngs):
        system = CompiledSystem(piece.equations)
        ineqs = [CompiledPoly(q) for q in piece.inequations]
        per_piece = max(1, max_starts // len(pieces))
        for k in range(per_piece):
            attempts += 1
            scale = scale0 * (0.5 ** (k % 12))
            x0 = target + scale * rng.standard_normal(len(target)) if k else target.copy()
            x = gauss_newton(system, x0, config, rng)
            if x is None:
                continue
            if any(abs(q.value(x)) <= config.sep_tol for q in ineqs):
                continue
            best = min(best, float(np.linalg.norm(x - target)))
    if not math.isfinite(best):
        raise NoConvergence("no feasible point found", {"starts": attempts})
    return best
