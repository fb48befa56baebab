"""Multivariate polynomials over Q: parsing, evaluation, norms and heights.

A polynomial is a map from exponent tuples to nonzero Fraction coefficients
(`MultiPoly`), one exponent slot per variable.  The text grammar is fixed:
variables `x0`..`xN`, integer or `a/b` rational literals, operators
`+ - * ^`, parentheses, no implicit multiplication, whitespace ignored.

Norms of coefficient systems come in two flavours per place: the max of the
coefficient norms, and (at the archimedean place only) the sum of the
absolute coefficients.  Heights of systems are the exact products of those
norms over the joint support, carried as `ExactLog`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal, Sequence

from .errors import PolyParseError, PreconditionError
from .qarith import ExactLog, Place, PlaceSet, normalized_abs, support

Monomial = tuple[int, ...]


def grevlex_key(mono: Monomial) -> tuple:
    """Sort key realizing graded reverse lexicographic order (larger = bigger)."""
    return (sum(mono), tuple(-e for e in reversed(mono)))


class MultiPoly:
    """A multivariate polynomial over Q with a fixed number of variables.

    Treated as immutable: no method mutates `terms` after construction.
    """

    __slots__ = ("terms", "num_vars", "_hash")

    def __init__(self, num_vars: int, terms: dict[Monomial, Fraction]):
        if num_vars < 1:
            raise PreconditionError("need at least one variable")
        clean: dict[Monomial, Fraction] = {}
        for mono, coef in terms.items():
            coef = Fraction(coef)
            if coef == 0:
                continue
            if len(mono) != num_vars or any(e < 0 for e in mono):
                raise PreconditionError(f"bad exponent tuple {mono} for {num_vars} vars")
            clean[tuple(mono)] = coef
        self.terms = clean
        self.num_vars = num_vars
        self._hash: int | None = None

    @classmethod
    def zero(cls, num_vars: int) -> "MultiPoly":
        return cls(num_vars, {})

    @classmethod
    def constant(cls, num_vars: int, value) -> "MultiPoly":
        return cls(num_vars, {(0,) * num_vars: Fraction(value)})

    @classmethod
    def variable(cls, num_vars: int, index: int) -> "MultiPoly":
        if not 0 <= index < num_vars:
            raise PreconditionError(f"variable index {index} out of range")
        exps = [0] * num_vars
        exps[index] = 1
        return cls(num_vars, {tuple(exps): Fraction(1)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        if not self.terms:
            return 0
        return max(sum(m) for m in self.terms)

    def coefficients(self) -> list[Fraction]:
        """Nonzero coefficients in descending grevlex term order."""
        return [self.terms[m] for m in sorted(self.terms, key=grevlex_key, reverse=True)]

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        self._check_ring(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, Fraction(0)) + c
        return MultiPoly(self.num_vars, out)

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.num_vars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self + (-other)

    def __mul__(self, other) -> "MultiPoly":
        if isinstance(other, (int, Fraction)):
            return self.scaled(other)
        self._check_ring(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return MultiPoly(self.num_vars, out)

    def __rmul__(self, other) -> "MultiPoly":
        return self.__mul__(other)

    def scaled(self, factor) -> "MultiPoly":
        factor = Fraction(factor)
        return MultiPoly(self.num_vars, {m: c * factor for m, c in self.terms.items()})

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise PreconditionError("negative polynomial powers are undefined")
        result = MultiPoly.constant(self.num_vars, 1)
        for _ in range(k):
            result = result * self
        return result

    def evaluate(self, point: Sequence) -> Fraction:
        """Exact value at a point given as one rational per variable."""
        if len(point) != self.num_vars:
            raise PreconditionError(
                f"point has {len(point)} coordinates, polynomial has {self.num_vars} variables"
            )
        vals = [Fraction(p) for p in point]
        total = Fraction(0)
        for mono, coef in self.terms.items():
            term = coef
            for e, v in zip(mono, vals):
                if e:
                    term *= v**e
            total += term
        return total

    def _check_ring(self, other: "MultiPoly") -> None:
        if self.num_vars != other.num_vars:
            raise PreconditionError("polynomials live in different rings")

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MultiPoly)
            and self.num_vars == other.num_vars
            and self.terms == other.terms
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.num_vars, tuple(sorted(self.terms.items()))))
        return self._hash

    def to_text(self, var_names: Sequence[str] | None = None) -> str:
        """Canonical text form, re-parseable by `parse_poly`."""
        if not self.terms:
            return "0"
        names = list(var_names) if var_names else [f"x{i}" for i in range(self.num_vars)]
        parts: list[str] = []
        for mono in sorted(self.terms, key=grevlex_key, reverse=True):
            coef = self.terms[mono]
            factors = [
                names[i] if e == 1 else f"{names[i]}^{e}"
                for i, e in enumerate(mono)
                if e > 0
            ]
            mag = abs(coef)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not parts:
                parts.append(body if coef > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coef > 0 else f"- {body}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"MultiPoly({self.num_vars}, {self.to_text()})"


def homogeneous_degree(f: MultiPoly) -> int | None:
    """Common total degree of all terms, or None if not homogeneous."""
    if f.is_zero:
        raise PreconditionError("the zero polynomial has no homogeneous degree")
    degs = {sum(m) for m in f.terms}
    return degs.pop() if len(degs) == 1 else None


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:\s*/\s*\d+)?)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise PolyParseError(f"unexpected character {stripped[0]!r}", pos)
        if m.lastgroup is None:
            break
        tokens.append((m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser for the fixed polynomial grammar."""

    def __init__(self, text: str, num_vars: int, var_names: Sequence[str] | None):
        self.tokens = _tokenize(text)
        self.idx = 0
        self.num_vars = num_vars
        if var_names is None:
            self.var_index = {f"x{i}": i for i in range(num_vars)}
        else:
            self.var_index = {name: i for i, name in enumerate(var_names)}

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.idx]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.idx]
        self.idx += 1
        return tok

    def expect_op(self, op: str) -> None:
        kind, value, pos = self.peek()
        if kind != "op" or value != op:
            raise PolyParseError(f"expected {op!r}", pos)
        self.advance()

    def parse(self) -> MultiPoly:
        poly = self.expr()
        kind, value, pos = self.peek()
        if kind != "end":
            raise PolyParseError(f"trailing input {value!r}", pos)
        return poly

    def expr(self) -> MultiPoly:
        result = self.term()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value in "+-":
                self.advance()
                rhs = self.term()
                result = result + rhs if value == "+" else result - rhs
            else:
                return result

    def term(self) -> MultiPoly:
        result = self.factor()
        while True:
            kind, value, _ = self.peek()
            if kind == "op" and value == "*":
                self.advance()
                result = result * self.factor()
            else:
                return result

    def factor(self) -> MultiPoly:
        kind, value, _ = self.peek()
        if kind == "op" and value == "-":
            self.advance()
            return -self.factor()
        base = self.atom()
        kind, value, pos = self.peek()
        if kind == "op" and value == "^":
            self.advance()
            kind, value, pos = self.peek()
            if kind != "number" or "/" in value:
                raise PolyParseError("exponent must be a nonnegative integer", pos)
            self.advance()
            return base ** int(value)
        return base

    def atom(self) -> MultiPoly:
        kind, value, pos = self.advance()
        if kind == "number":
            return MultiPoly.constant(self.num_vars, Fraction(value.replace(" ", "")))
        if kind == "name":
            index = self.var_index.get(value)
            if index is None or index >= self.num_vars:
                raise PolyParseError(f"unknown variable {value!r}", pos)
            return MultiPoly.variable(self.num_vars, index)
        if kind == "op" and value == "(":
            inner = self.expr()
            self.expect_op(")")
            return inner
        raise PolyParseError(f"expected a number, variable or '('", pos)


def parse_poly(
    text: str, num_vars: int, var_names: Sequence[str] | None = None
) -> MultiPoly:
    """Parse polynomial text; rejects an identically zero result."""
    poly = _Parser(text, num_vars, var_names).parse()
    if poly.is_zero:
        raise PolyParseError("polynomial is identically zero", len(text))
    return poly


@dataclass(frozen=True)
class PolySystem:
    """A list of nonzero homogeneous polynomials over common variables."""

    polys: tuple[MultiPoly, ...]
    degrees: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.polys:
            raise PreconditionError("empty polynomial system")
        nv = self.polys[0].num_vars
        for f, d in zip(self.polys, self.degrees):
            if f.num_vars != nv:
                raise PreconditionError("system polynomials in different rings")
            if homogeneous_degree(f) != d:
                raise PreconditionError(
                    f"{f} is not homogeneous of recorded degree {d}"
                )

    @classmethod
    def of(cls, polys: Iterable[MultiPoly]) -> "PolySystem":
        polys = tuple(polys)
        degrees = []
        for f in polys:
            d = homogeneous_degree(f)
            if d is None:
                raise PreconditionError(f"{f} is not homogeneous")
            degrees.append(d)
        return cls(polys, tuple(degrees))

    @property
    def num_vars(self) -> int:
        return self.polys[0].num_vars


NormVariant = Literal["max", "sum"]
HeightVariant = Literal["h", "h1"]


def _all_coefficients(polys: Sequence[MultiPoly]) -> list[Fraction]:
    coeffs: list[Fraction] = []
    for f in polys:
        if f.is_zero:
            raise PreconditionError("norms of the zero polynomial are undefined")
        coeffs.extend(f.coefficients())
    if not coeffs:
        raise PreconditionError("empty polynomial list")
    return coeffs


def system_norm(polys: Sequence[MultiPoly], v: Place, variant: NormVariant = "max") -> Fraction:
    """||f_1,...,f_r||_v (max) or ||f_1,...,f_r||_{v,1} (sum at infinity).

    At a finite place the sum variant coincides with the max variant; at the
    archimedean place it is the sum of the absolute coefficients.
    """
    coeffs = _all_coefficients(polys)
    if variant == "sum" and v.is_infinite:
        return sum(abs(c) for c in coeffs)
    return max(normalized_abs(c, v) for c in coeffs)


def coefficient_support(polys: Sequence[MultiPoly]) -> PlaceSet:
    """Joint support of all coefficients (always includes infinity)."""
    result = PlaceSet.of([Place.infinity()])
    for c in _all_coefficients(polys):
        result = result.union(support(c))
    return result


def system_height(polys: Sequence[MultiPoly], variant: HeightVariant = "h") -> ExactLog:
    """h (product of max-norms) or h1 (product of sum-norms) of a system.

    The product runs over the joint support of the coefficients; every other
    place contributes the factor 1.
    """
    norm_variant: NormVariant = "sum" if variant == "h1" else "max"
    total = Fraction(1)
    for v in coefficient_support(polys):
        total *= system_norm(polys, v, norm_variant)
    return ExactLog(total)
