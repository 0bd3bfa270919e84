"""Jacobian matrices and the determinantal ideals of singular and Milnor sets.

The singular set of a map germ is the locus where the Jacobian drops below
maximal rank; the Milnor set relative to a distance-like function rho is the
rank-drop locus of the Jacobian stacked on the gradient row of rho.  Both are
presented here by fully expanded minor generators, which keeps membership
tests exact at rational points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .errors import DimensionMismatch, InvalidRho
from .poly import Polynomial, PolyMap, euclidean_rho


@dataclass(frozen=True)
class PolyMatrix:
    """Row-major matrix of polynomials over a shared variable list."""

    rows: int
    cols: int
    entries: tuple[Polynomial, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise DimensionMismatch(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )
        variables = self.entries[0].variables
        if any(e.variables != variables for e in self.entries):
            raise DimensionMismatch("matrix entries use different variable lists")

    @property
    def variables(self) -> tuple[str, ...]:
        return self.entries[0].variables

    def entry(self, i: int, j: int) -> Polynomial:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Polynomial, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def stack(self, other: "PolyMatrix") -> "PolyMatrix":
        if other.cols != self.cols:
            raise DimensionMismatch("cannot stack matrices with different widths")
        return PolyMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def evaluate_float(self, point: Sequence[float]) -> list[list[float]]:
        return [
            [self.entry(i, j).evaluate_float(point) for j in range(self.cols)]
            for i in range(self.rows)
        ]

    def evaluate_exact(self, point) -> list[list[Fraction]]:
        return [
            [self.entry(i, j).evaluate_exact(point) for j in range(self.cols)]
            for i in range(self.rows)
        ]


def jacobian(f: PolyMap) -> PolyMatrix:
    """The N x M matrix of exact partials, entry (i, j) = dF_i/dx_j."""
    entries = [
        comp.differentiate(v) for comp in f.components for v in f.variables
    ]
    return PolyMatrix(f.target_dim, f.source_dim, tuple(entries))


def gradient_row(p: Polynomial) -> PolyMatrix:
    """The 1 x M gradient of a scalar polynomial as a matrix row."""
    return PolyMatrix(1, len(p.variables), tuple(p.gradient()))


def _minor_det(mat: PolyMatrix, rows: tuple[int, ...], cols: tuple[int, ...], cache) -> Polynomial:
    # Laplace expansion along the first selected row, memoized on the
    # (rows, cols) index pair; sizes here never exceed 6.
    key = (rows, cols)
    hit = cache.get(key)
    if hit is not None:
        return hit
    if len(rows) == 1:
        result = mat.entry(rows[0], cols[0])
    else:
        result = Polynomial.zero(mat.variables)
        sub_rows = rows[1:]
        for k, col in enumerate(cols):
            entry = mat.entry(rows[0], col)
            if entry.is_zero():
                continue
            sub_cols = cols[:k] + cols[k + 1 :]
            cofactor = _minor_det(mat, sub_rows, sub_cols, cache)
            term = entry * cofactor
            result = result + term if k % 2 == 0 else result - term
    cache[key] = result
    return result


def determinant(mat: PolyMatrix) -> Polynomial:
    """Exact determinant of a square polynomial matrix."""
    if mat.rows != mat.cols:
        raise DimensionMismatch(f"determinant of a {mat.rows}x{mat.cols} matrix")
    return _minor_det(mat, tuple(range(mat.rows)), tuple(range(mat.cols)), {})


def all_minors(mat: PolyMatrix, k: int) -> list[Polynomial]:
    """All k x k minors of the matrix, fully expanded."""
    if k < 1 or k > min(mat.rows, mat.cols):
        raise DimensionMismatch(
            f"no {k}x{k} minors in a {mat.rows}x{mat.cols} matrix"
        )
    cache: dict = {}
    return [
        _minor_det(mat, rows, cols, cache)
        for rows in combinations(range(mat.rows), k)
        for cols in combinations(range(mat.cols), k)
    ]


@dataclass(frozen=True)
class IdealGenerators:
    """Generators whose common zero locus is the set of interest.

    Canonical form: zero generators are dropped and generators agreeing up
    to a rational scalar multiple are deduplicated.  An empty generator
    tuple therefore cuts out the whole ambient space, while any nonzero
    constant generator makes the zero locus empty.
    """

    variables: tuple[str, ...]
    generators: tuple[Polynomial, ...]

    @classmethod
    def from_polynomials(
        cls, variables: Sequence[str], polys: Sequence[Polynomial]
    ) -> "IdealGenerators":
        variables = tuple(variables)
        seen: set[Polynomial] = set()
        for p in polys:
            if p.variables != variables:
                raise DimensionMismatch("generator over a different variable list")
            if p.is_zero():
                continue
            seen.add(p.monic())
        ordered = sorted(seen, key=str)
        return cls(variables, tuple(ordered))

    def is_trivially_empty(self) -> bool:
        """True iff some generator is a nonzero constant."""
        return any(g.is_constant() and not g.is_zero() for g in self.generators)

    def is_ambient(self) -> bool:
        """True iff there are no generators left (whole space)."""
        return not self.generators

    def vanishes_exact(self, point) -> bool:
        return all(g.evaluate_exact(point) == 0 for g in self.generators)

    def max_residual_float(self, point) -> float:
        return max(
            (abs(g.evaluate_float(point)) for g in self.generators), default=0.0
        )


def singular_set_ideal(f: PolyMap) -> IdealGenerators:
    """Minor generators of the rank-deficiency locus of the Jacobian.

    Maximal rank is min(M, N); the common zero set of the returned
    min(M,N) x min(M,N) minors is exactly the singular set of the map.
    """
    jac = jacobian(f)
    k = min(jac.rows, jac.cols)
    return IdealGenerators.from_polynomials(f.variables, all_minors(jac, k))


def milnor_set_ideal(f: PolyMap, rho: Polynomial | None = None) -> IdealGenerators:
    """Minor generators of the Milnor set of f relative to rho.

    Stacks the Jacobian of f on the gradient row of rho and returns all
    k x k minors with k = min(M, N+1).  rho defaults to the squared
    Euclidean distance.
    """
    if rho is None:
        rho = euclidean_rho(f.variables)
    if rho.variables != f.variables:
        raise DimensionMismatch(
            f"rho is over {rho.variables}, map is over {f.variables}"
        )
    if rho.constant_term() != 0:
        raise InvalidRho("rho must vanish at the origin")
    stacked = jacobian(f).stack(gradient_row(rho))
    k = min(f.source_dim, f.target_dim + 1)
    return IdealGenerators.from_polynomials(f.variables, all_minors(stacked, k))


def validate_proper_rho(rho: Polynomial) -> None:
    """Syntactic properness check for a distance-like function.

    Accepts sums of single-variable even-power monomials with positive
    coefficients in which every variable occurs; such functions are proper,
    nonnegative and vanish only at the origin.  Raises InvalidRho otherwise.
    """
    if rho.is_zero():
        raise InvalidRho("rho is identically zero")
    covered = set()
    for exps, coeff in rho.terms.items():
        live = [i for i, e in enumerate(exps) if e]
        if len(live) != 1:
            raise InvalidRho(
                f"term with exponents {exps} is not a single-variable power"
            )
        idx = live[0]
        if exps[idx] % 2 != 0:
            raise InvalidRho(
                f"variable {rho.variables[idx]!r} appears with odd power {exps[idx]}"
            )
        if coeff <= 0:
            raise InvalidRho(f"non-positive coefficient {coeff}")
        covered.add(idx)
    missing = [v for i, v in enumerate(rho.variables) if i not in covered]
    if missing:
        raise InvalidRho(f"variables {missing} do not appear in rho")
