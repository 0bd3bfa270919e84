"""Exception types shared across the package."""

from __future__ import annotations


class GermkitError(Exception):
    """Base class for all package-specific errors."""


class ParseError(GermkitError):
    """Malformed polynomial text; carries the 0-based offset of the problem."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UnknownVariable(GermkitError):
    """A name appeared that is not in the declared variable list."""

    def __init__(self, name: str, position: int = -1):
        where = f" (at position {position})" if position >= 0 else ""
        super().__init__(f"unknown variable {name!r}{where}")
        self.name = name
        self.position = position


class NegativeExponent(GermkitError):
    """An exponent was negative or not an integer."""


class DimensionMismatch(GermkitError):
    """Point length, variable count or map dimensions do not line up."""


class NonFinite(GermkitError):
    """Floating-point evaluation overflowed to inf or produced nan."""


class InvalidTolerance(GermkitError):
    """A tolerance that must be positive was not."""


class NoConvergence(GermkitError):
    """A sampler or projector produced no accepted points.

    Either the set slice is empty or the system is badly conditioned; the
    attached diagnostics let the caller tell which story is more likely.
    """

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class PreconditionNotMet(GermkitError):
    """A check's hypothesis failed; names the offending hypothesis."""

    def __init__(self, hypothesis: str, detail: str = ""):
        msg = hypothesis if not detail else f"{hypothesis}: {detail}"
        super().__init__(msg)
        self.hypothesis = hypothesis


class InvalidRho(GermkitError):
    """The distance-like function fails the syntactic properness check."""


class GradientVanishesOnSphere(GermkitError):
    """The gradient has a zero on (or numerically near) the test sphere."""


class DegreeDisagreement(GermkitError):
    """Independent degree computations disagree; lists all candidates."""

    def __init__(self, candidates: list[int]):
        super().__init__(f"degree candidates disagree: {candidates}")
        self.candidates = candidates
