"""Constructible sets: finite unions of {equations = 0, inequations != 0}.

A point belongs to the set iff it belongs to some piece, meaning all of the
piece's equations vanish and none of its inequations do.  An empty piece
list is the empty set; a piece with no constraints at all is the whole
ambient space.  Complements and differences distribute over pieces, which is
all the set algebra the singular/Milnor machinery needs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionMismatch, InvalidTolerance
from .minors import IdealGenerators
from .poly import Polynomial


@dataclass(frozen=True)
class BasicPiece:
    """One conjunction: every equation vanishes, no inequation vanishes."""

    equations: tuple[Polynomial, ...]
    inequations: tuple[Polynomial, ...]

    def is_trivially_empty(self) -> bool:
        return any(e.is_constant() and not e.is_zero() for e in self.equations) or any(
            i.is_zero() for i in self.inequations
        )

    def normalized(self) -> "BasicPiece":
        # Drop constraints that are identically satisfied.
        eqs = tuple(e for e in self.equations if not e.is_zero())
        ineqs = tuple(i for i in self.inequations if not i.is_constant() or i.is_zero())
        return BasicPiece(eqs, ineqs)


class ConstructibleSet:
    """Finite union of basic pieces over a shared variable list."""

    __slots__ = ("variables", "pieces")

    def __init__(self, variables: Sequence[str], pieces: Iterable[BasicPiece]):
        variables = tuple(variables)
        kept = []
        for piece in pieces:
            for p in piece.equations + piece.inequations:
                if p.variables != variables:
                    raise DimensionMismatch(
                        f"piece polynomial over {p.variables}, expected {variables}"
                    )
            piece = piece.normalized()
            if not piece.is_trivially_empty():
                kept.append(piece)
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "pieces", tuple(kept))

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("ConstructibleSet is immutable")

    # -- constructors --------------------------------------------------------

    @classmethod
    def empty(cls, variables: Sequence[str]) -> "ConstructibleSet":
        return cls(variables, [])

    @classmethod
    def ambient(cls, variables: Sequence[str]) -> "ConstructibleSet":
        return cls(variables, [BasicPiece((), ())])

    @classmethod
    def variety(
        cls, source: IdealGenerators | Sequence[Polynomial], variables: Sequence[str] | None = None
    ) -> "ConstructibleSet":
        """The common zero locus of a generator family as a single piece."""
        if isinstance(source, IdealGenerators):
            variables = source.variables
            gens = source.generators
        else:
            gens = tuple(source)
            if variables is None:
                if not gens:
                    raise DimensionMismatch("cannot infer variables of an empty family")
                variables = gens[0].variables
        return cls(variables, [BasicPiece(tuple(gens), ())])

    # -- membership -----------------------------------------------------------

    def member_exact(self, point) -> bool:
        """Exact membership at a rational point."""
        if len(point) != len(self.variables):
            raise DimensionMismatch(
                f"point has {len(point)} coordinates, expected {len(self.variables)}"
            )
        for piece in self.pieces:
            if all(e.evaluate_exact(point) == 0 for e in piece.equations) and all(
                i.evaluate_exact(point) != 0 for i in piece.inequations
            ):
                return True
        return False

    def member_float(self, point, tol: float) -> bool:
        """Tolerance membership: |equation| <= tol and |inequation| > tol."""
        if tol <= 0:
            raise InvalidTolerance(f"tolerance must be positive, got {tol}")
        if len(point) != len(self.variables):
            raise DimensionMismatch(
                f"point has {len(point)} coordinates, expected {len(self.variables)}"
            )
        for piece in self.pieces:
            if all(abs(e.evaluate_float(point)) <= tol for e in piece.equations) and all(
                abs(i.evaluate_float(point)) > tol for i in piece.inequations
            ):
                return True
        return False

    def residual_float(self, point) -> float:
        """Smallest over pieces of the largest equation magnitude.

        Inequations are ignored; useful as a distance-like diagnostic.
        """
        best = float("inf")
        for piece in self.pieces:
            worst = max(
                (abs(e.evaluate_float(point)) for e in piece.equations), default=0.0
            )
            best = min(best, worst)
        return best

    # -- set algebra ------------------------------------------------------------

    def union(self, other: "ConstructibleSet") -> "ConstructibleSet":
        self._check_compatible(other)
        return ConstructibleSet(self.variables, self.pieces + other.pieces)

    def intersect(self, other: "ConstructibleSet") -> "ConstructibleSet":
        self._check_compatible(other)
        pieces = [
            BasicPiece(a.equations + b.equations, a.inequations + b.inequations)
            for a in self.pieces
            for b in other.pieces
        ]
        return ConstructibleSet(self.variables, pieces)

    def complement(self) -> "ConstructibleSet":
        """Complement, distributed over pieces.

        The complement of one piece is the union of "some equation fails"
        and "some inequation vanishes"; the complement of the union is the
        intersection of those.
        """
        result = ConstructibleSet.ambient(self.variables)
        for piece in self.pieces:
            negated = [BasicPiece((), (e,)) for e in piece.equations]
            negated += [BasicPiece((i,), ()) for i in piece.inequations]
            result = result.intersect(ConstructibleSet(self.variables, negated))
        return result

    def difference(self, other: "ConstructibleSet") -> "ConstructibleSet":
        return self.intersect(other.complement())

    def is_syntactically_empty(self) -> bool:
        return not self.pieces

    def _check_compatible(self, other: "ConstructibleSet") -> None:
        if other.variables != self.variables:
            raise DimensionMismatch(
                f"sets over different variables: {self.variables} vs {other.variables}"
            )

    def __repr__(self) -> str:
        chunks = []
        for piece in self.pieces:
            eqs = ", ".join(f"{e} = 0" for e in piece.equations) or "ambient"
            ineqs = ", ".join(f"{i} != 0" for i in piece.inequations)
            chunks.append("{" + eqs + ("; " + ineqs if ineqs else "") + "}")
        return "ConstructibleSet(" + (" U ".join(chunks) or "empty") + ")"
