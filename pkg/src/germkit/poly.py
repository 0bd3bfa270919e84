"""Exact sparse multivariate polynomials and polynomial map germs.

Coefficients are arbitrary-precision rationals (``fractions.Fraction``), so
ring operations, differentiation, substitution and rational-point evaluation
are exact.  Floating evaluation is a separate binary64 pathway used by the
numeric samplers.  Terms are kept in canonical form (no zero coefficients)
and printed in graded-lexicographic order, which makes equality decidable
and output deterministic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    DimensionMismatch,
    NegativeExponent,
    NonFinite,
    ParseError,
    UnknownVariable,
)

Exponents = tuple[int, ...]

_NUMBER = "number"
_NAME = "name"
_OP = "op"
_END = "end"


def _grlex(exps: Exponents) -> tuple:
    # Sort key for graded lexicographic order (total degree, then lex).
    return (sum(exps), exps)


class Polynomial:
    """Sparse multivariate polynomial over Q with a fixed variable list.

    Instances are immutable and hashable.  Two polynomials over the same
    variable list compare equal iff their canonical term maps are equal.
    """

    __slots__ = ("variables", "terms", "_hash")

    def __init__(
        self,
        variables: Sequence[str],
        terms: Mapping[Exponents, Fraction | int] | None = None,
    ):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names in {variables}")
        clean: dict[Exponents, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(exps)
            if len(exps) != len(variables):
                raise DimensionMismatch(
                    f"exponent vector {exps} has length {len(exps)}, "
                    f"expected {len(variables)}"
                )
            if any(e < 0 or not isinstance(e, int) for e in exps):
                raise NegativeExponent(f"bad exponent vector {exps}")
            coeff = Fraction(coeff)
            if coeff != 0:
                acc = clean.get(exps)
                clean[exps] = coeff if acc is None else acc + coeff
                if clean[exps] == 0:
                    del clean[exps]
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("Polynomial is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "Polynomial":
        return cls(variables, {})

    @classmethod
    def constant(cls, variables: Sequence[str], value) -> "Polynomial":
        return cls(variables, {(0,) * len(variables): Fraction(value)})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "Polynomial":
        variables = tuple(variables)
        if name not in variables:
            raise UnknownVariable(name)
        exps = [0] * len(variables)
        exps[variables.index(name)] = 1
        return cls(variables, {tuple(exps): Fraction(1)})

    # -- ring structure ----------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise DimensionMismatch(
                    f"variable lists differ: {self.variables} vs {other.variables}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.variables, other)
        return NotImplemented  # type: ignore[return-value]

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for exps, c in other.terms.items():
            out[exps] = out.get(exps, Fraction(0)) + c
        return Polynomial(self.variables, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(
            self.variables, {e: -c for e, c in self.terms.items()}
        )

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return Polynomial(
                self.variables,
                {e: c * other for e, c in self.terms.items()},
            )
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Exponents, Fraction] = {}
        for ea, ca in self.terms.items():
            for eb, cb in other.terms.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                out[key] = out.get(key, Fraction(0)) + ca * cb
        return Polynomial(self.variables, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise NegativeExponent(f"polynomial power must be a non-negative integer, got {n}")
        result = Polynomial.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            h = hash((self.variables, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return self._hash

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def total_degree(self) -> int:
        """Total degree; 0 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        idx = self._var_index(name)
        return max((e[idx] for e in self.terms), default=0)

    def sorted_terms(self) -> list[tuple[Exponents, Fraction]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self.terms.items(), key=lambda t: _grlex(t[0]), reverse=True)

    def leading_coefficient(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        return self.sorted_terms()[0][1]

    def monic(self) -> "Polynomial":
        """Scale so the graded-lex leading coefficient is 1 (zero stays zero)."""
        lc = self.leading_coefficient()
        if lc == 0 or lc == 1:
            return self
        return self * (1 / lc)

    def _var_index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariable(name) from None

    # -- calculus and evaluation --------------------------------------------

    def differentiate(self, name: str) -> "Polynomial":
        """Exact partial derivative with respect to one variable."""
        idx = self._var_index(name)
        out: dict[Exponents, Fraction] = {}
        for exps, c in self.terms.items():
            k = exps[idx]
            if k == 0:
                continue
            e = list(exps)
            e[idx] = k - 1
            out[tuple(e)] = c * k
        return Polynomial(self.variables, out)

    def gradient(self) -> list["Polynomial"]:
        return [self.differentiate(v) for v in self.variables]

    def _eval(self, values: Sequence, zero):
        if len(values) != len(self.variables):
            raise DimensionMismatch(
                f"point has {len(values)} coordinates, expected {len(self.variables)}"
            )
        return _horner(list(self.terms.items()), 0, list(values), zero)

    def evaluate_exact(self, point: Sequence[Fraction | int]) -> Fraction:
        """Exact value at a rational point."""
        return self._eval([Fraction(v) for v in point], Fraction(0))

    def evaluate_float(self, point: Sequence[float]) -> float:
        """Binary64 value at a float point; raises NonFinite on overflow."""
        try:
            value = float(self._eval([float(v) for v in point], 0.0))
        except OverflowError as err:
            raise NonFinite(f"evaluation overflowed: {err}") from None
        if not math.isfinite(value):
            raise NonFinite(f"evaluation produced {value!r}")
        return value

    def substitute(self, values: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute a polynomial for each variable (exact composition)."""
        if not values:
            raise DimensionMismatch("no substitution values given")
        zero = Polynomial.zero(values[0].variables)
        return self._eval(list(values), zero)

    def rename_variables(self, variables: Sequence[str]) -> "Polynomial":
        """Same terms over a new variable list of equal length."""
        variables = tuple(variables)
        if len(variables) != len(self.variables):
            raise DimensionMismatch("variable list length changed")
        return Polynomial(variables, self.terms)

    # -- printing ------------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks: list[str] = []
        for i, (exps, coeff) in enumerate(self.sorted_terms()):
            mono = "*".join(
                v if e == 1 else f"{v}^{e}"
                for v, e in zip(self.variables, exps)
                if e
            )
            mag = abs(coeff)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{mag}*{mono}"
            else:
                body = str(mag)
            if i == 0:
                chunks.append(body if coeff > 0 else f"-{body}")
            else:
                chunks.append(f" + {body}" if coeff > 0 else f" - {body}")
        return "".join(chunks)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, vars={list(self.variables)})"


def _horner(items, idx, values, zero):
    # Horner-style accumulation, generic over the coefficient ring of
    # `values` (Fraction, float, or Polynomial all work).
    if not items:
        return zero
    if idx == len(values):
        acc = zero
        for _, c in items:
            acc = acc + c
        return acc
    groups: dict[int, list] = {}
    for exps, c in items:
        groups.setdefault(exps[idx], []).append((exps, c))
    x = values[idx]
    order = sorted(groups, reverse=True)
    acc = _horner(groups[order[0]], idx + 1, values, zero)
    prev = order[0]
    for e in order[1:]:
        acc = acc * x ** (prev - e) + _horner(groups[e], idx + 1, values, zero)
        prev = e
    if prev:
        acc = acc * x**prev
    return acc


# ---------------------------------------------------------------------------
# parsing


def _tokenize(text: str):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            num = int(text[i:j])
            # A '/' immediately inside a literal makes a rational constant.
            if j < n and text[j] == "/" and j + 1 < n and text[j + 1].isdigit():
                k = j + 1
                while k < n and text[k].isdigit():
                    k += 1
                den = int(text[j + 1 : k])
                if den == 0:
                    raise ParseError("zero denominator in rational literal", i)
                tokens.append((_NUMBER, Fraction(num, den), i))
                i = k
            else:
                tokens.append((_NUMBER, Fraction(num), i))
                i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append((_NAME, text[i:j], i))
            i = j
            continue
        if ch in "+-*^()":
            tokens.append((_OP, ch, i))
            i += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append((_END, "", n))
    return tokens


class _Parser:
    # expr   := term (('+'|'-') term)*
    # term   := factor ('*' factor)*
    # factor := ('+'|'-')* power
    # power  := atom ('^' integer)?
    # atom   := NUMBER | NAME | '(' expr ')'

    def __init__(self, text: str, variables: Sequence[str]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.variables = tuple(variables)

    def peek(self):
        return self.tokens[self.pos]

    def advance(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def parse(self) -> Polynomial:
        result = self.expr()
        kind, value, pos = self.peek()
        if kind != _END:
            raise ParseError(f"unexpected trailing {value!r}", pos)
        return result

    def expr(self) -> Polynomial:
        node = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == _OP and value in "+-":
                self.advance()
                rhs = self.term()
                node = node + rhs if value == "+" else node - rhs
            else:
                return node

    def term(self) -> Polynomial:
        node = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == _OP and value == "*":
                self.advance()
                node = node * self.factor()
            else:
                return node

    def factor(self) -> Polynomial:
        sign = 1
        while True:
            kind, value, _ = self.peek()
            if kind == _OP and value in "+-":
                self.advance()
                if value == "-":
                    sign = -sign
            else:
                break
        node = self.power()
        return node if sign == 1 else -node

    def power(self) -> Polynomial:
        node = self.atom()
        kind, value, _ = self.peek()
        if kind == _OP and value == "^":
            self.advance()
            kind, value, pos = self.advance()
            if kind == _OP and value == "-":
                raise NegativeExponent(f"negative exponent at position {pos}")
            if kind != _NUMBER or value.denominator != 1:
                raise ParseError("exponent must be a non-negative integer", pos)
            node = node ** int(value)
        return node

    def atom(self) -> Polynomial:
        kind, value, pos = self.advance()
        if kind == _NUMBER:
            return Polynomial.constant(self.variables, value)
        if kind == _NAME:
            if value not in self.variables:
                raise UnknownVariable(value, pos)
            return Polynomial.variable(self.variables, value)
        if kind == _OP and value == "(":
            node = self.expr()
            kind, value, pos = self.advance()
            if not (kind == _OP and value == ")"):
                raise ParseError("expected ')'", pos)
            return node
        raise ParseError(f"expected a number, variable or '(', got {value!r}", pos)


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse an expression over the named variables into canonical form.

    The grammar accepts integer and rational literals (``5``, ``1/3``),
    ``+``, ``-``, ``*``, ``^`` with non-negative integer exponents, and
    parentheses.  Multiplication must be explicit and whitespace is ignored.
    Printed polynomials round-trip through this parser.
    """
    return _Parser(text, variables).parse()


# ---------------------------------------------------------------------------
# polynomial map germs


class PolyMap:
    """Ordered list of polynomials sharing one variable list.

    Models a polynomial map germ (R^M, 0) -> (R^N, 0): every component must
    vanish at the origin, which the constructor enforces.
    """

    __slots__ = ("components", "variables")

    def __init__(self, components: Sequence[Polynomial]):
        components = tuple(components)
        if not components:
            raise DimensionMismatch("a map needs at least one component")
        variables = components[0].variables
        for i, comp in enumerate(components):
            if comp.variables != variables:
                raise DimensionMismatch(
                    f"component {i} uses variables {comp.variables}, expected {variables}"
                )
            if comp.constant_term() != 0:
                raise ValueError(
                    f"component {i} does not vanish at the origin "
                    f"(constant term {comp.constant_term()})"
                )
        object.__setattr__(self, "components", components)
        object.__setattr__(self, "variables", variables)

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("PolyMap is immutable")

    @classmethod
    def from_strings(cls, texts: Sequence[str], variables: Sequence[str]) -> "PolyMap":
        return cls([parse_polynomial(t, variables) for t in texts])

    @classmethod
    def identity(cls, variables: Sequence[str]) -> "PolyMap":
        return cls([Polynomial.variable(variables, v) for v in variables])

    @property
    def source_dim(self) -> int:
        return len(self.variables)

    @property
    def target_dim(self) -> int:
        return len(self.components)

    @property
    def origin_check(self) -> bool:
        """True iff F(0) = 0; guaranteed by construction."""
        return all(c.constant_term() == 0 for c in self.components)

    def evaluate_exact(self, point: Sequence[Fraction | int]) -> tuple[Fraction, ...]:
        return tuple(c.evaluate_exact(point) for c in self.components)

    def evaluate_float(self, point: Sequence[float]) -> tuple[float, ...]:
        return tuple(c.evaluate_float(point) for c in self.components)

    def __eq__(self, other):
        if not isinstance(other, PolyMap):
            return NotImplemented
        return self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.components) + ")"

    def __repr__(self) -> str:
        return f"PolyMap({str(self)}, vars={list(self.variables)})"


def compose(g: PolyMap, f: PolyMap) -> PolyMap:
    """The composition g after f, expanded exactly."""
    if f.target_dim != g.source_dim:
        raise DimensionMismatch(
            f"cannot compose: inner map has target dim {f.target_dim}, "
            f"outer map has source dim {g.source_dim}"
        )
    return PolyMap([comp.substitute(list(f.components)) for comp in g.components])


def euclidean_rho(variables: Sequence[str]) -> Polynomial:
    """The squared Euclidean distance to the origin."""
    variables = tuple(variables)
    terms = {}
    for i in range(len(variables)):
        e = [0] * len(variables)
        e[i] = 2
        terms[tuple(e)] = Fraction(1)
    return Polynomial(variables, terms)
