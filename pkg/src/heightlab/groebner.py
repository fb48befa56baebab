"""A small exact Groebner engine over Q.

Buchberger's algorithm with the Gebauer-Moeller formulation of the product
and chain criteria, graded reverse lexicographic order by default, and a
configurable resource budget (processed S-pairs, maximal S-pair degree) that
fails loudly instead of hanging on elimination blow-ups.

On top of the basis computation: ideal membership, projective dimension via
independent variable sets of the leading-term ideal, degree via the Hilbert
series numerator, colon ideals and saturation by the irrelevant ideal,
intersections and elimination ideals, and projective emptiness tests.

Ideals with an empty generator list denote the zero ideal.  Input ideals are
not checked for primality; operations that assume irreducibility say so.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BudgetExceededError, PreconditionError, StructuralError
from .polyalg import Monomial, MultiPoly, grevlex_key, homogeneous_degree, parse_poly


# ---------------------------------------------------------------------------
# Term orders
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedRevLex:
    name: str = "grevlex"

    def key(self, mono: Monomial) -> tuple:
        return grevlex_key(mono)


@dataclass(frozen=True)
class Lex:
    name: str = "lex"

    def key(self, mono: Monomial) -> tuple:
        return mono


@dataclass(frozen=True)
class EliminationOrder:
    """Block order eliminating `block`: any monomial containing a block
    variable is larger than any monomial free of them."""

    block: frozenset[int]
    name: str = "elimination"

    def key(self, mono: Monomial) -> tuple:
        inside = tuple(e for i, e in enumerate(mono) if i in self.block)
        outside = tuple(e for i, e in enumerate(mono) if i not in self.block)
        return (grevlex_key(inside), grevlex_key(outside))


TermOrder = GradedRevLex | Lex | EliminationOrder


# ---------------------------------------------------------------------------
# Budgets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Budget:
    """Resource cap for a basis computation."""

    max_pairs: int = 200_000
    max_degree: int = 200

    @classmethod
    def parse(cls, text: str) -> "Budget":
        try:
            pairs, deg = text.split(",")
            return cls(int(pairs), int(deg))
        except ValueError as exc:
            raise PreconditionError(f"bad budget {text!r}, expected PAIRS,DEG") from exc


DEFAULT_BUDGET = Budget()


# ---------------------------------------------------------------------------
# Ideals
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Ideal:
    """An ideal given by generators; an empty tuple is the zero ideal."""

    num_vars: int
    gens: tuple[MultiPoly, ...]

    def __post_init__(self) -> None:
        for g in self.gens:
            if g.num_vars != self.num_vars:
                raise PreconditionError("generator in wrong ring")
            if g.is_zero:
                raise PreconditionError("zero polynomial among generators")

    @classmethod
    def of(cls, num_vars: int, gens: Iterable[MultiPoly]) -> "Ideal":
        return cls(num_vars, tuple(g for g in gens if not g.is_zero))

    @property
    def is_homogeneous(self) -> bool:
        return all(homogeneous_degree(g) is not None for g in self.gens)

    def require_homogeneous(self) -> None:
        if not self.is_homogeneous:
            raise PreconditionError("ideal is not homogeneous")

    def to_json(self) -> dict:
        return {"vars": self.num_vars, "gens": [g.to_text() for g in self.gens]}

    @classmethod
    def from_json(cls, data: dict) -> "Ideal":
        nv = int(data["vars"])
        return cls.of(nv, (parse_poly(t, nv) for t in data["gens"]))


@dataclass(frozen=True)
class GroebnerBasis:
    """A reduced, monic Groebner basis together with its term order."""

    num_vars: int
    order: TermOrder
    basis: tuple[MultiPoly, ...]

    def leading_monomials(self) -> list[Monomial]:
        key = self.order.key
        return [max(g.terms, key=key) for g in self.basis]

    def contains_constant(self) -> bool:
        return any(set(g.terms) == {(0,) * self.num_vars} for g in self.basis)

    def reduce(self, f: MultiPoly) -> MultiPoly:
        """Full normal form of f modulo the basis."""
        elems = [_Elem(g.terms, self.order.key) for g in self.basis]
        return MultiPoly(self.num_vars, _normal_form(f.terms, elems, self.order.key))

    def contains(self, f: MultiPoly) -> bool:
        return self.reduce(f).is_zero


# ---------------------------------------------------------------------------
# Core polynomial machinery on raw term dicts
# ---------------------------------------------------------------------------


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _coprime(a: Monomial, b: Monomial) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


class _Elem:
    """A basis element with cached leading data."""

    __slots__ = ("poly", "lm", "lc", "serial")

    def __init__(self, poly: dict[Monomial, Fraction], key, serial: int = -1):
        self.poly = poly
        self.lm = max(poly, key=key)
        self.lc = poly[self.lm]
        self.serial = serial


def _normal_form(f: dict[Monomial, Fraction], elems: Sequence[_Elem], key) -> dict:
    out: dict[Monomial, Fraction] = {}
    work = dict(f)
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        reducer = None
        for e in elems:
            if _divides(e.lm, m):
                reducer = e
                break
        if reducer is None:
            out[m] = c
            continue
        shift = tuple(a - b for a, b in zip(m, reducer.lm))
        factor = c / reducer.lc
        for mm, cc in reducer.poly.items():
            if mm == reducer.lm:
                continue
            t = tuple(a + b for a, b in zip(mm, shift))
            acc = work.get(t, Fraction(0)) - factor * cc
            if acc:
                work[t] = acc
            else:
                work.pop(t, None)
    return out


def _spoly(e1: _Elem, e2: _Elem) -> dict[Monomial, Fraction]:
    l = _lcm(e1.lm, e2.lm)
    s1 = tuple(a - b for a, b in zip(l, e1.lm))
    s2 = tuple(a - b for a, b in zip(l, e2.lm))
    out: dict[Monomial, Fraction] = {}
    inv1 = 1 / e1.lc
    inv2 = 1 / e2.lc
    for mm, cc in e1.poly.items():
        t = tuple(a + b for a, b in zip(mm, s1))
        out[t] = out.get(t, Fraction(0)) + cc * inv1
    for mm, cc in e2.poly.items():
        t = tuple(a + b for a, b in zip(mm, s2))
        acc = out.get(t, Fraction(0)) - cc * inv2
        if acc:
            out[t] = acc
        else:
            out.pop(t, None)
    return {m: c for m, c in out.items() if c}


def _monic(poly: dict[Monomial, Fraction], key) -> dict[Monomial, Fraction]:
    lc = poly[max(poly, key=key)]
    if lc == 1:
        return poly
    return {m: c / lc for m, c in poly.items()}


def _update(
    G: list[_Elem], P: list[tuple[_Elem, _Elem]], h: _Elem
) -> tuple[list[_Elem], list[tuple[_Elem, _Elem]]]:
    """Gebauer-Moeller pair update: product and chain criteria."""
    C = list(G)
    D: list[_Elem] = []
    while C:
        g1 = C.pop(0)
        l1 = _lcm(h.lm, g1.lm)
        if _coprime(h.lm, g1.lm) or (
            not any(_divides(_lcm(h.lm, g2.lm), l1) for g2 in C)
            and not any(_divides(_lcm(h.lm, g2.lm), l1) for g2 in D)
        ):
            D.append(g1)
    E = [(h, g) for g in D if not _coprime(h.lm, g.lm)]
    P_new: list[tuple[_Elem, _Elem]] = []
    for g1, g2 in P:
        l = _lcm(g1.lm, g2.lm)
        if (
            not _divides(h.lm, l)
            or _lcm(g1.lm, h.lm) == l
            or _lcm(g2.lm, h.lm) == l
        ):
            P_new.append((g1, g2))
    P_new.extend(E)
    G_new = [g for g in G if not _divides(h.lm, g.lm)]
    G_new.append(h)
    return G_new, P_new


def _interreduce(polys: list[dict], key) -> list[dict]:
    """Mutually reduce a list of term dicts until stable.

    Reductions are applied sequentially in place, so each step rewrites one
    element modulo the current others and the generated ideal never changes.
    """
    current: list[dict | None] = [p for p in polys if p]
    changed = True
    while changed:
        changed = False
        for i, p in enumerate(current):
            if p is None:
                continue
            others = [
                _Elem(q, key) for j, q in enumerate(current) if j != i and q
            ]
            r = _normal_form(p, others, key) if others else p
            if r != p:
                changed = True
                current[i] = r if r else None
        current = [p for p in current if p]
    return [_monic(p, key) for p in current]


def groebner_basis(
    ideal: Ideal, order: TermOrder = GradedRevLex(), budget: Budget | None = None
) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal for the given order.

    Raises BudgetExceededError once more S-pairs are processed than the
    budget allows or an S-pair lcm exceeds the degree cap.
    """
    budget = budget or DEFAULT_BUDGET
    key = order.key
    inputs = _interreduce([dict(g.terms) for g in ideal.gens], key)
    inputs.sort(key=lambda p: key(max(p, key=key)))
    G: list[_Elem] = []
    P: list[tuple[_Elem, _Elem]] = []
    serial = 0
    for poly in inputs:
        G, P = _update(G, P, _Elem(poly, key, serial))
        serial += 1
    processed = 0
    while P:
        best = min(
            range(len(P)),
            key=lambda i: (key(_lcm(P[i][0].lm, P[i][1].lm)), P[i][0].serial, P[i][1].serial),
        )
        g1, g2 = P.pop(best)
        lcm_deg = sum(_lcm(g1.lm, g2.lm))
        processed += 1
        if processed > budget.max_pairs:
            raise BudgetExceededError(
                f"S-pair budget exceeded ({budget.max_pairs} pairs)"
            )
        if lcm_deg > budget.max_degree:
            raise BudgetExceededError(
                f"S-pair degree {lcm_deg} exceeds budget {budget.max_degree}"
            )
        s = _spoly(g1, g2)
        r = _normal_form(s, G, key) if s else {}
        if r:
            G, P = _update(G, P, _Elem(_monic(r, key), key, serial))
            serial += 1
    reduced = _interreduce([e.poly for e in G], key)
    reduced.sort(key=lambda p: key(max(p, key=key)), reverse=True)
    gb = GroebnerBasis(
        ideal.num_vars, order, tuple(MultiPoly(ideal.num_vars, p) for p in reduced)
    )
    for g in ideal.gens:
        if not gb.contains(g):
            raise StructuralError("input generator does not reduce to zero")
    return gb


# ---------------------------------------------------------------------------
# Dimension and degree
# ---------------------------------------------------------------------------


def _krull_dimension_from_lms(lms: Sequence[Monomial], num_vars: int) -> int:
    """Krull dimension of R/in(I): the largest variable subset touching no
    leading monomial's support.  Returns -1 for the unit ideal."""
    if any(sum(m) == 0 for m in lms):
        return -1
    masks = []
    for m in lms:
        mask = 0
        for i, e in enumerate(m):
            if e:
                mask |= 1 << i
        masks.append(mask)
    best = 0
    for subset in range(1 << num_vars):
        size = subset.bit_count()
        if size <= best:
            continue
        if all(mask & ~subset for mask in masks):
            best = size
    return best


def projective_dimension(
    ideal: Ideal, budget: Budget | None = None, basis: GroebnerBasis | None = None
) -> int:
    """Dimension of the projective zero set; -1 means empty."""
    ideal.require_homogeneous()
    gb = basis or groebner_basis(ideal, GradedRevLex(), budget)
    krull = _krull_dimension_from_lms(gb.leading_monomials(), ideal.num_vars)
    return max(krull - 1, -1)


def hilbert_numerator(lms: Sequence[Monomial], num_vars: int) -> list[int]:
    """Coefficients of N(t) where the Hilbert series of R/(lms) is
    N(t)/(1-t)^num_vars."""
    gens = _minimalize(lms)
    return _hilbert_rec(gens)


def _minimalize(monos: Sequence[Monomial]) -> tuple[Monomial, ...]:
    unique = sorted(set(monos), key=lambda m: (sum(m), m))
    out: list[Monomial] = []
    for m in unique:
        if not any(_divides(g, m) for g in out):
            out.append(m)
    return tuple(out)


def _poly_mul_shift(p: list[int], shift: int) -> list[int]:
    return [0] * shift + p


def _poly_add(a: list[int], b: list[int]) -> list[int]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _hilbert_rec(gens: tuple[Monomial, ...]) -> list[int]:
    if not gens:
        return [1]
    if any(sum(m) == 0 for m in gens):
        return [0]
    pairwise_coprime = all(
        _coprime(gens[i], gens[j])
        for i in range(len(gens))
        for j in range(i + 1, len(gens))
    )
    if pairwise_coprime:
        result = [1]
        for m in gens:
            factor = [1] + [0] * (sum(m) - 1) + [-1]
            result = _poly_mul(result, factor)
        return result
    counts: dict[int, int] = {}
    for m in gens:
        for i, e in enumerate(m):
            if e:
                counts[i] = counts.get(i, 0) + 1
    pivot_var = max(counts, key=lambda i: (counts[i], -i))
    nv = len(gens[0])
    pivot = tuple(1 if i == pivot_var else 0 for i in range(nv))
    # 0 -> R/(I:p) ·p-> R/I -> R/(I+(p)) -> 0  gives  N_I = N_{I+(p)} + t*N_{I:p}
    plus = _minimalize([m for m in gens if m[pivot_var] == 0] + [pivot])
    colon = _minimalize(
        [tuple(e - 1 if i == pivot_var and e else e for i, e in enumerate(m)) for m in gens]
    )
    return _poly_add(_hilbert_rec(plus), _poly_mul_shift(_hilbert_rec(colon), 1))


def hilbert_data(
    ideal: Ideal, budget: Budget | None = None, basis: GroebnerBasis | None = None
) -> tuple[int, int]:
    """(Krull dimension of R/I, degree of the top-dimensional part)."""
    gb = basis or groebner_basis(ideal, GradedRevLex(), budget)
    numerator = hilbert_numerator(gb.leading_monomials(), ideal.num_vars)
    cancellations = 0
    while len(numerator) > 0 and sum(numerator) == 0:
        # divide by (1 - t): synthetic division
        out = []
        acc = 0
        for c in numerator[:-1]:
            acc += c
            out.append(acc)
        numerator = out
        cancellations += 1
    value_at_one = sum(numerator)
    if value_at_one == 0:
        # numerator identically zero: R/I = 0 (unit ideal)
        return (-1, 0)
    return (ideal.num_vars - cancellations, value_at_one)


def degree(
    ideal: Ideal, budget: Budget | None = None, basis: GroebnerBasis | None = None
) -> int:
    """Degree of the projective zero set via the Hilbert series numerator."""
    ideal.require_homogeneous()
    gb = basis or groebner_basis(ideal, GradedRevLex(), budget)
    if projective_dimension(ideal, budget, basis=gb) < 0:
        raise PreconditionError("degree of an empty projective set is undefined")
    _, deg = hilbert_data(ideal, budget, basis=gb)
    return deg


def is_projectively_empty(ideal: Ideal, budget: Budget | None = None) -> bool:
    """True iff the projective zero set is empty."""
    return projective_dimension(ideal, budget) == -1


# ---------------------------------------------------------------------------
# Elimination, intersection, colon, saturation
# ---------------------------------------------------------------------------


def eliminate(ideal: Ideal, drop: Iterable[int], budget: Budget | None = None) -> Ideal:
    """Generators of the elimination ideal I ∩ k[variables outside `drop`].

    The result lives in the same ambient ring; its generators simply never
    mention the dropped variables.
    """
    drop = frozenset(drop)
    if not drop:
        gb = groebner_basis(ideal, GradedRevLex(), budget)
        return Ideal.of(ideal.num_vars, gb.basis)
    if any(i < 0 or i >= ideal.num_vars for i in drop):
        raise PreconditionError("drop index out of range")
    gb = groebner_basis(ideal, EliminationOrder(drop), budget)
    kept = [
        g
        for g in gb.basis
        if all(all(m[i] == 0 for i in drop) for m in g.terms)
    ]
    return Ideal.of(ideal.num_vars, kept)


def _extend_ring(f: MultiPoly, extra: int) -> MultiPoly:
    return MultiPoly(
        f.num_vars + extra, {m + (0,) * extra: c for m, c in f.terms.items()}
    )


def _drop_last_var(f: MultiPoly) -> MultiPoly:
    if any(m[-1] != 0 for m in f.terms):
        raise StructuralError("polynomial still involves the helper variable")
    return MultiPoly(f.num_vars - 1, {m[:-1]: c for m, c in f.terms.items()})


def intersect(I: Ideal, J: Ideal, budget: Budget | None = None) -> Ideal:
    """I ∩ J via the single-tag-variable elimination trick."""
    if I.num_vars != J.num_vars:
        raise PreconditionError("ideals in different rings")
    nv = I.num_vars
    t = MultiPoly.variable(nv + 1, nv)
    one = MultiPoly.constant(nv + 1, 1)
    gens = [t * _extend_ring(g, 1) for g in I.gens]
    gens += [(one - t) * _extend_ring(g, 1) for g in J.gens]
    big = Ideal.of(nv + 1, gens)
    elim = eliminate(big, {nv}, budget)
    return Ideal.of(nv, (_drop_last_var(g) for g in elim.gens))


def _exact_quotient(g: MultiPoly, f: MultiPoly) -> MultiPoly:
    """Quotient g/f when f divides g exactly."""
    key = grevlex_key
    quotient: dict[Monomial, Fraction] = {}
    work = dict(g.terms)
    f_elem = _Elem(dict(f.terms), key)
    while work:
        m = max(work, key=key)
        c = work.pop(m)
        if not _divides(f_elem.lm, m):
            raise StructuralError("polynomial division left a remainder")
        shift = tuple(a - b for a, b in zip(m, f_elem.lm))
        factor = c / f_elem.lc
        quotient[shift] = quotient.get(shift, Fraction(0)) + factor
        for mm, cc in f_elem.poly.items():
            if mm == f_elem.lm:
                continue
            tmono = tuple(a + b for a, b in zip(mm, shift))
            acc = work.get(tmono, Fraction(0)) - factor * cc
            if acc:
                work[tmono] = acc
            else:
                work.pop(tmono, None)
    return MultiPoly(g.num_vars, quotient)


def colon(I: Ideal, f: MultiPoly, budget: Budget | None = None) -> Ideal:
    """The colon ideal (I : f) for a single nonzero polynomial f."""
    if f.is_zero:
        raise PreconditionError("colon by the zero polynomial")
    inter = intersect(I, Ideal.of(I.num_vars, [f]), budget)
    return Ideal.of(I.num_vars, (_exact_quotient(g, f) for g in inter.gens))


def _canonical_gens(I: Ideal, budget: Budget | None) -> tuple[MultiPoly, ...]:
    return groebner_basis(I, GradedRevLex(), budget).basis


def saturate_by_variables(
    ideal: Ideal, variables: Iterable[int], budget: Budget | None = None
) -> Ideal:
    """(I : (x_i : i in variables)^infinity), by iterated colons to a fixpoint."""
    variables = sorted(set(variables))
    if not variables:
        raise PreconditionError("saturation needs at least one variable")
    current = Ideal.of(ideal.num_vars, _canonical_gens(ideal, budget))
    while True:
        if not current.gens:
            return current
        pieces = [
            colon(current, MultiPoly.variable(ideal.num_vars, i), budget)
            for i in variables
        ]
        merged = pieces[0]
        for piece in pieces[1:]:
            merged = intersect(merged, piece, budget)
        merged = Ideal.of(ideal.num_vars, _canonical_gens(merged, budget))
        if merged.gens == current.gens:
            return current
        current = merged


def saturate_irrelevant(ideal: Ideal, budget: Budget | None = None) -> Ideal:
    """(I : (x_0,...,x_N)^infinity), by iterated colon ideals to a fixpoint."""
    ideal.require_homogeneous()
    return saturate_by_variables(ideal, range(ideal.num_vars), budget)


def restrict_ideal(ideal: Ideal, keep: Sequence[int]) -> Ideal:
    """Reexpress an ideal whose generators only involve `keep` in a smaller ring."""
    keep = list(keep)
    gens = []
    for g in ideal.gens:
        for m in g.terms:
            if any(e and i not in keep for i, e in enumerate(m)):
                raise StructuralError("generator involves a variable outside the kept set")
        gens.append(
            MultiPoly(
                len(keep), {tuple(m[i] for i in keep): c for m, c in g.terms.items()}
            )
        )
    return Ideal.of(len(keep), gens)
