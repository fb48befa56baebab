"""Chow forms, Chow weights, image varieties and the weight lower bounds.

The Chow form of an n-dimensional X in P^N is obtained by adjoining n+1
blocks of dual variables u_i = (u_{i0},...,u_{iN}), imposing the incidence
relations sum_j u_{ij} x_j = 0, removing the components supported on x = 0,
and eliminating the x variables.  We compute the elimination chart by chart:
for an x-homogeneous ideal I,

    (I : (x_0,...,x_N)^inf) ∩ k[u]  =  ∩_k ( I|_{x_k=1} ∩ k[u] ),

so each chart is one affine elimination and the results are intersected
(identical charts are merged first).  The outcome must be principal; a
non-principal result signals a reducible input or a wrong dimension and is
reported as a structural error, never resolved by guessing multiplicities.

Chow weights are evaluated in exact rational arithmetic: rational weight
tuples keep the piecewise-linear maximum exactly testable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from .errors import HypothesisError, InternalCheckError, PreconditionError, StructuralError
from .geometry import DivisorFamily, distributive_constant
from .groebner import (
    Budget,
    EliminationOrder,
    GradedRevLex,
    GroebnerBasis,
    Ideal,
    degree,
    groebner_basis,
    intersect,
    is_projectively_empty,
    projective_dimension,
    restrict_ideal,
)
from .heights import WeightAssignment
from .polyalg import MultiPoly, Monomial, grevlex_key, homogeneous_degree, parse_poly


@dataclass(frozen=True)
class ChowForm:
    """Chow form of an n-dimensional subvariety of P^N.

    The polynomial lives in the ring of the (n+1)(N+1) block variables
    u_{ij}, flattened as index i*(N+1)+j, and is monic with respect to the
    graded reverse lexicographic leading term.
    """

    poly: MultiPoly
    n: int
    ambient_dim: int
    per_block_degree: int

    def __post_init__(self) -> None:
        expected = (self.n + 1) * (self.ambient_dim + 1)
        if self.poly.num_vars != expected:
            raise PreconditionError("Chow form in the wrong block ring")
        for i in range(self.n + 1):
            for mono in self.poly.terms:
                block_deg = sum(
                    mono[i * (self.ambient_dim + 1) + j]
                    for j in range(self.ambient_dim + 1)
                )
                if block_deg != self.per_block_degree:
                    raise StructuralError(
                        f"not homogeneous of degree {self.per_block_degree} in block {i}"
                    )

    def var_names(self) -> list[str]:
        return [
            f"u{i}{j}" if self.ambient_dim < 10 and self.n < 10 else f"u{i}_{j}"
            for i in range(self.n + 1)
            for j in range(self.ambient_dim + 1)
        ]

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "N": self.ambient_dim,
            "per_block_degree": self.per_block_degree,
            "vars": self.poly.num_vars,
            "gens": [self.poly.to_text(self.var_names())],
        }

    @classmethod
    def from_json(cls, data: dict) -> "ChowForm":
        n = int(data["n"])
        ambient = int(data["N"])
        names = [
            f"u{i}{j}" if ambient < 10 and n < 10 else f"u{i}_{j}"
            for i in range(n + 1)
            for j in range(ambient + 1)
        ]
        poly = parse_poly(data["gens"][0], (n + 1) * (ambient + 1), names)
        return cls(poly, n, ambient, int(data["per_block_degree"]))


_chow_cache: dict[tuple, ChowForm] = {}


def _substitute_one(f: MultiPoly, index: int) -> MultiPoly:
    """Set variable `index` to 1 (the result stays in the same ring)."""
    out: dict[Monomial, Fraction] = {}
    for mono, coef in f.terms.items():
        m = list(mono)
        m[index] = 0
        key = tuple(m)
        out[key] = out.get(key, Fraction(0)) + coef
    return MultiPoly(f.num_vars, out)


def chow_form(X: Ideal, n: int, budget: Budget | None = None) -> ChowForm:
    """Chow form of X, assuming X is prime of projective dimension n.

    The per-block degree of the result is checked against degree(X); the
    elimination must come out principal.
    """
    X.require_homogeneous()
    cache_key = (X.num_vars, tuple(g.to_text() for g in X.gens), n)
    cached = _chow_cache.get(cache_key)
    if cached is not None:
        return cached
    N = X.num_vars - 1
    if projective_dimension(X, budget) != n:
        raise PreconditionError(f"ideal does not define an {n}-dimensional set")
    deg_x = degree(X, budget)
    n_x = N + 1
    n_u = (n + 1) * (N + 1)
    total = n_x + n_u

    def extend(f: MultiPoly) -> MultiPoly:
        return MultiPoly(total, {m + (0,) * n_u: c for m, c in f.terms.items()})

    gens = [extend(g) for g in X.gens]
    for i in range(n + 1):
        incidence: dict[Monomial, Fraction] = {}
        for j in range(N + 1):
            mono = [0] * total
            mono[j] = 1
            mono[n_x + i * (N + 1) + j] = 1
            incidence[tuple(mono)] = Fraction(1)
        gens.append(MultiPoly(total, incidence))

    x_block = set(range(n_x))
    u_indices = list(range(n_x, total))
    chart_ideals: list[Ideal] = []
    seen: set[tuple] = set()
    for k in range(n_x):
        chart_gens = [
            g for g in (_substitute_one(f, k) for f in gens) if not g.is_zero
        ]
        gb = groebner_basis(Ideal.of(total, chart_gens), EliminationOrder(frozenset(x_block)), budget)
        if gb.contains_constant():
            # X misses this chart entirely; the chart contributes nothing
            continue
        kept = [
            g
            for g in gb.basis
            if all(all(m[i] == 0 for i in x_block) for m in g.terms)
        ]
        chart = restrict_ideal(Ideal.of(total, kept), u_indices)
        chart = Ideal.of(n_u, groebner_basis(chart, GradedRevLex(), budget).basis)
        signature = tuple(g.to_text() for g in chart.gens)
        if signature not in seen:
            seen.add(signature)
            chart_ideals.append(chart)
    if not chart_ideals:
        raise StructuralError("no chart carries the variety; is the input empty?")

    result = chart_ideals[0]
    for other in chart_ideals[1:]:
        result = Ideal.of(
            n_u, groebner_basis(intersect(result, other, budget), GradedRevLex(), budget).basis
        )
    if len(result.gens) != 1:
        raise StructuralError(
            f"elimination is not principal ({len(result.gens)} generators): "
            "input reducible or wrong dimension"
        )
    form = ChowForm(result.gens[0], n, N, deg_x)
    _chow_cache[cache_key] = form
    return form


@dataclass(frozen=True)
class ChowWeightVector:
    """A tuple of N+1 nonnegative rational coordinate weights."""

    c: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if any(x < 0 for x in self.c):
            raise PreconditionError("Chow weights must be nonnegative")

    @classmethod
    def of(cls, values) -> "ChowWeightVector":
        return cls(tuple(Fraction(v) for v in values))

    def shifted(self, t) -> "ChowWeightVector":
        t = Fraction(t)
        return ChowWeightVector(tuple(x + t for x in self.c))


def chow_weight(form: ChowForm, c: ChowWeightVector) -> Fraction:
    """e_X(c): the maximal c-weighted degree among monomials of the form."""
    if len(c.c) != form.ambient_dim + 1:
        raise PreconditionError("weight vector length must be N+1")
    width = form.ambient_dim + 1
    best: Fraction | None = None
    for mono in form.poly.terms:
        w = Fraction(0)
        for pos, e in enumerate(mono):
            if e:
                w += e * c.c[pos % width]
        if best is None or w > best:
            best = w
    return best


def chow_weight_aggregate(form: ChowForm, weights: WeightAssignment) -> Fraction:
    """E_Y(c) = (1/((n+1) D)) * sum_v e_Y(c_v), exactly.

    Demands the full weight-assignment conditions, including the unit budget
    on the per-place maxima.
    """
    if weights.ambient_dim != form.ambient_dim:
        raise PreconditionError("weight assignment dimension mismatch")
    weights.require_unit_budget()
    total = Fraction(0)
    for _, vec in weights.per_place:
        total += chow_weight(form, ChowWeightVector(vec))
    return total / ((form.n + 1) * form.per_block_degree)


def image_variety(
    X: Ideal, maps: Sequence[MultiPoly], budget: Budget | None = None
) -> Ideal:
    """The ideal of the image of X under x -> (g_0(x),...,g_R(x)).

    The g_i must be homogeneous of one common degree with no common zero on
    X.  The image dimension must match dim X, and its degree is checked
    against deg(X) * Delta^n.
    """
    if not maps:
        raise PreconditionError("empty coordinate map")
    degs = {homogeneous_degree(g) for g in maps}
    if None in degs or len(degs) != 1:
        raise PreconditionError("map components must share one homogeneous degree")
    delta = degs.pop()
    if not is_projectively_empty(Ideal.of(X.num_vars, tuple(X.gens) + tuple(maps)), budget):
        raise PreconditionError("map components share a zero on X; not a finite morphism")
    n_x = X.num_vars
    R = len(maps) - 1
    total = n_x + R + 1

    def extend(f: MultiPoly) -> MultiPoly:
        return MultiPoly(total, {m + (0,) * (R + 1): c for m, c in f.terms.items()})

    gens = [extend(g) for g in X.gens]
    for i, g in enumerate(maps):
        gens.append(MultiPoly.variable(total, n_x + i) - extend(g))
    gb = groebner_basis(Ideal.of(total, gens), EliminationOrder(frozenset(range(n_x))), budget)
    kept = [
        g
        for g in gb.basis
        if all(all(m[i] == 0 for i in range(n_x)) for m in g.terms)
    ]
    image = restrict_ideal(Ideal.of(total, kept), list(range(n_x, total)))
    n = projective_dimension(X, budget)
    d = degree(X, budget)
    dim_y = projective_dimension(image, budget)
    if dim_y != n:
        raise InternalCheckError(f"image dimension {dim_y} differs from dim X = {n}")
    deg_y = degree(image, budget)
    if deg_y > d * delta**n:
        raise InternalCheckError(
            f"image degree {deg_y} exceeds the bound {d} * {delta}^{n}"
        )
    return image


Thm22Mode = Literal["filtered", "empty-intersection"]


@dataclass(frozen=True)
class HypothesisCheck:
    name: str
    holds: bool
    detail: str


@dataclass(frozen=True)
class Thm22Report:
    """Verified instance of a Chow-weight lower bound."""

    mode: Thm22Mode
    indices: tuple[int, ...]
    weights: tuple[Fraction, ...]
    lhs: Fraction
    rhs: Fraction
    delta_family: Fraction
    delta_used: Fraction
    degree_y: int
    dim_y: int
    hypotheses: tuple[HypothesisCheck, ...]
    equality: bool

    def to_json(self) -> dict:
        return {
            "mode": self.mode,
            "indices": list(self.indices),
            "c": [str(w) for w in self.weights],
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "delta_family": str(self.delta_family),
            "delta_used": str(self.delta_used),
            "degree_Y": self.degree_y,
            "dim_Y": self.dim_y,
            "equality": self.equality,
            "hypotheses": [
                {"name": h.name, "holds": h.holds, "detail": h.detail}
                for h in self.hypotheses
            ],
        }


def thm22_report(
    Y: Ideal | ChowForm,
    indices: Sequence[int],
    c: ChowWeightVector,
    mode: Thm22Mode,
    delta: Fraction | None = None,
    Y_ideal: Ideal | None = None,
    budget: Budget | None = None,
) -> Thm22Report:
    """Check one Chow-weight lower bound with machine-checked hypotheses.

    Filtered mode: the last selected weight is minimal among the selection,
    the first m selected hyperplanes still meet Y, and the bound is
    (deg Y / delta_family) * sum of selected weights.  Empty-intersection
    mode: all m+1 selected hyperplanes miss Y, a caller-supplied delta is
    only accepted above the recomputed family constant, and the bound is
    deg Y * (n + delta) / ((m+1) delta) * sum of selected weights.
    """
    if isinstance(Y, ChowForm):
        form = Y
        if Y_ideal is None:
            raise PreconditionError("need the ideal of Y alongside its Chow form")
        ideal_y = Y_ideal
    else:
        ideal_y = Y
        form = chow_form(Y, projective_dimension(Y, budget), budget)
    R = form.ambient_dim
    n = form.n
    m = len(indices) - 1
    indices = tuple(indices)
    if len(set(indices)) != len(indices) or any(i < 0 or i > R for i in indices):
        raise PreconditionError("hyperplane indices must be distinct and within 0..R")
    if m < 1:
        raise PreconditionError("need at least two selected hyperplanes")
    if len(c.c) != R + 1:
        raise PreconditionError("weight vector length must be R+1")

    if mode == "filtered" and delta is not None:
        raise PreconditionError("a delta bound is only meaningful in empty-intersection mode")

    gb_y = groebner_basis(ideal_y, GradedRevLex(), budget)
    checks: list[HypothesisCheck] = [
        HypothesisCheck(
            "at least dim Y + 1 hyperplanes selected", m >= n, f"m = {m}, dim Y = {n}"
        )
    ]

    def coordinate(i: int) -> MultiPoly:
        return MultiPoly.variable(R + 1, i)

    for i in indices:
        contained = gb_y.contains(coordinate(i))
        checks.append(
            HypothesisCheck(
                f"Y not contained in H_{i}",
                not contained,
                "y_%d %s I(Y)" % (i, "in" if contained else "not in"),
            )
        )

    def section_ideal(sel: Sequence[int]) -> Ideal:
        return Ideal.of(R + 1, tuple(ideal_y.gens) + tuple(coordinate(i) for i in sel))

    if mode == "filtered":
        min_ok = c.c[indices[-1]] == min(c.c[i] for i in indices)
        checks.append(
            HypothesisCheck(
                "last selected weight is minimal",
                min_ok,
                f"c[{indices[-1]}] = {c.c[indices[-1]]}",
            )
        )
        first_m = indices[:-1]
        nonempty = not is_projectively_empty(section_ideal(first_m), budget)
        checks.append(
            HypothesisCheck(
                "first m hyperplanes still meet Y",
                nonempty,
                f"indices {list(first_m)}",
            )
        )
    else:
        empty = is_projectively_empty(section_ideal(indices), budget)
        checks.append(
            HypothesisCheck(
                "all m+1 hyperplanes miss Y",
                empty,
                f"indices {list(indices)}",
            )
        )

    failures = [f"{h.name} ({h.detail})" for h in checks if not h.holds]
    if failures:
        raise HypothesisError(failures)

    family = DivisorFamily.of(
        ideal_y, [[coordinate(i)] for i in indices], mode="divisor", budget=budget
    )
    delta_family = distributive_constant(family).value

    delta_used = delta_family
    if mode == "empty-intersection" and delta is not None:
        bound_ok = delta_family <= delta
        checks.append(
            HypothesisCheck(
                "supplied delta dominates the family constant",
                bound_ok,
                f"computed {delta_family}, supplied {delta}",
            )
        )
        if not bound_ok:
            raise HypothesisError(
                [f"supplied delta dominates the family constant (computed {delta_family}, supplied {delta})"]
            )
        delta_used = Fraction(delta)

    lhs = chow_weight(form, c)
    weight_sum = sum((c.c[i] for i in indices), Fraction(0))
    deg_y = form.per_block_degree
    if mode == "filtered":
        rhs = Fraction(deg_y) / delta_family * weight_sum
    else:
        rhs = Fraction(deg_y) * (n + delta_used) / ((m + 1) * delta_used) * weight_sum
    if lhs < rhs:
        raise InternalCheckError(
            f"Chow-weight bound violated: e_Y(c) = {lhs} < {rhs}"
        )
    return Thm22Report(
        mode=mode,
        indices=indices,
        weights=c.c,
        lhs=lhs,
        rhs=rhs,
        delta_family=delta_family,
        delta_used=delta_used,
        degree_y=deg_y,
        dim_y=n,
        hypotheses=tuple(checks),
        equality=lhs == rhs,
    )
