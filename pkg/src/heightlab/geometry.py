"""Distributive constants, position tests, filtrations, generic combinations.

The distributive constant of a family of divisors (or closed subschemes)
with respect to X is the maximum over nonempty subfamilies J of
#J / (dim X - dim of the intersection of X with J); subfamilies with empty
intersection contribute 0 in divisor mode because the empty set carries
dimension -infinity.  Subscheme mode clamps every term below by 1.

Subset enumeration is exhaustive (the maximum admits no known subadditive
shortcut), with intersection dimensions memoized per family; the family
size is capped so 2^q - 1 subsets stay affordable.  X is assumed
irreducible: the containment check X not in D_j tests generator membership
in I(X) and a nonpositive dimension drop is reported as a structural error.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Literal, Sequence

from .errors import (
    BudgetExceededError,
    InternalCheckError,
    PreconditionError,
    StructuralError,
)
from .groebner import (
    Budget,
    GradedRevLex,
    Ideal,
    groebner_basis,
    is_projectively_empty,
    projective_dimension,
)
from .polyalg import MultiPoly, homogeneous_degree, parse_poly

FamilyMode = Literal["divisor", "subscheme"]

MAX_FAMILY_SIZE = 12


@dataclass
class DivisorFamily:
    """A family of divisors or closed subschemes on an ambient variety X.

    Each member is a list of homogeneous polynomials (a single equation in
    divisor mode).  No member may contain X.
    """

    ambient: Ideal
    members: tuple[tuple[MultiPoly, ...], ...]
    mode: FamilyMode
    budget: Budget | None = None
    _dim_cache: dict[frozenset[int], int] = field(default_factory=dict, repr=False)
    _dim_x: int | None = field(default=None, repr=False)

    @classmethod
    def of(
        cls,
        ambient: Ideal,
        members: Sequence[Sequence[MultiPoly]],
        mode: FamilyMode = "divisor",
        budget: Budget | None = None,
    ) -> "DivisorFamily":
        ambient.require_homogeneous()
        packed = []
        for k, member in enumerate(members):
            polys = tuple(member)
            if not polys:
                raise PreconditionError(f"member {k} has no defining polynomial")
            if mode == "divisor" and len(polys) != 1:
                raise PreconditionError("divisor-mode members are single hypersurfaces")
            for f in polys:
                if homogeneous_degree(f) is None:
                    raise PreconditionError(f"member {k} is not homogeneous")
            packed.append(polys)
        family = cls(ambient, tuple(packed), mode, budget)
        gb = groebner_basis(ambient, GradedRevLex(), budget)
        for k, polys in enumerate(family.members):
            if all(gb.contains(f) for f in polys):
                raise PreconditionError(f"member {k} contains X")
        return family

    @classmethod
    def from_json(cls, data: dict, budget: Budget | None = None) -> "DivisorFamily":
        ambient = Ideal.from_json(data["X"])
        nv = ambient.num_vars
        members = [
            [parse_poly(text, nv) for text in member] for member in data["members"]
        ]
        return cls.of(ambient, members, data.get("mode", "divisor"), budget)

    @property
    def size(self) -> int:
        return len(self.members)

    def dim_x(self) -> int:
        if self._dim_x is None:
            self._dim_x = projective_dimension(self.ambient, self.budget)
        return self._dim_x

    def intersection_dimension(self, subset: Sequence[int]) -> int:
        """dim of X cut by the members in `subset`; -1 means empty."""
        key = frozenset(subset)
        cached = self._dim_cache.get(key)
        if cached is not None:
            return cached
        gens = list(self.ambient.gens)
        for j in key:
            gens.extend(self.members[j])
        dim = projective_dimension(Ideal.of(self.ambient.num_vars, gens), self.budget)
        self._dim_cache[key] = dim
        return dim


@dataclass(frozen=True)
class DistributiveReport:
    value: Fraction
    witness: tuple[int, ...]
    table: tuple[tuple[tuple[int, ...], int, Fraction], ...]

    def to_json(self) -> dict:
        return {
            "value": str(self.value),
            "witness": list(self.witness),
            "table": [
                {
                    "subset": list(subset),
                    "dimension": dim,
                    "contribution": str(contribution),
                }
                for subset, dim, contribution in self.table
            ],
        }


def _subsets_lex(q: int):
    subsets = []
    for size in range(1, q + 1):
        subsets.extend(combinations(range(q), size))
    subsets.sort()
    return subsets


def distributive_constant(family: DivisorFamily) -> DistributiveReport:
    """Exact distributive constant with a lexicographically least witness."""
    q = family.size
    if q > MAX_FAMILY_SIZE:
        raise BudgetExceededError(
            f"family size {q} exceeds the subset-enumeration cap {MAX_FAMILY_SIZE}"
        )
    dim_x = family.dim_x()
    if dim_x < 0:
        raise PreconditionError("ambient variety is empty")
    floor = Fraction(1) if family.mode == "subscheme" else Fraction(0)
    best: Fraction | None = None
    witness: tuple[int, ...] = ()
    table = []
    for subset in _subsets_lex(q):
        dim = family.intersection_dimension(subset)
        if dim == -1:
            contribution = floor
        else:
            drop = dim_x - dim
            if drop <= 0:
                raise StructuralError(
                    f"members {list(subset)} do not cut X down; is X irreducible?"
                )
            contribution = Fraction(len(subset), drop)
            if family.mode == "subscheme":
                contribution = max(contribution, Fraction(1))
        table.append((subset, dim, contribution))
        if best is None or contribution > best:
            best = contribution
            witness = subset
    return DistributiveReport(best, witness, tuple(table))


@dataclass(frozen=True)
class SubgeneralReport:
    holds: bool
    m: int
    violations: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {
            "holds": self.holds,
            "m": self.m,
            "violations": [list(v) for v in self.violations],
        }


def subgeneral_position_check(family: DivisorFamily, m: int) -> SubgeneralReport:
    """m-subgeneral position: every m+1 members miss X entirely."""
    if family.size < m + 1:
        raise PreconditionError("need at least m+1 members")
    violations = []
    for subset in combinations(range(family.size), m + 1):
        if family.intersection_dimension(subset) != -1:
            violations.append(subset)
    return SubgeneralReport(not violations, m, tuple(violations))


@dataclass(frozen=True)
class Filtration:
    """Indices where the prefix intersection dimension drops.

    `prefix_dims` records dim(X ∩ Q_0 ∩ ... ∩ Q_s) for each s (-1 = empty);
    `t_indices` has length dim X + 1 with t_u the first prefix reaching
    dimension dim X - u - 1.  `multi_drop` flags dimension jumps larger than
    one, which the generic-combination construction refuses.
    """

    t_indices: tuple[int, ...]
    prefix_dims: tuple[int, ...]
    multi_drop: bool
    flags: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "t": list(self.t_indices),
            "prefix_dims": list(self.prefix_dims),
            "multi_drop": self.multi_drop,
            "flags": list(self.flags),
        }


def dimension_filtration(
    X: Ideal, divisors: Sequence[MultiPoly], budget: Budget | None = None
) -> Filtration:
    """Prefix-dimension filtration of an ordered divisor list on X."""
    if not divisors:
        raise PreconditionError("empty divisor list")
    n = projective_dimension(X, budget)
    if n < 0:
        raise PreconditionError("ambient variety is empty")
    dims: list[int] = []
    gens = list(X.gens)
    for f in divisors:
        gens.append(f)
        dims.append(projective_dimension(Ideal.of(X.num_vars, gens), budget))
    if dims[-1] != -1:
        raise PreconditionError("the full intersection with X is nonempty")
    flags: list[str] = []
    multi_drop = False
    previous = n
    for s, d in enumerate(dims):
        if d > previous:
            raise StructuralError("prefix dimension increased")
        if previous - d > 1:
            multi_drop = True
            flags.append(f"dimension drops by {previous - d} at index {s}")
        previous = d
    t_indices = [0]
    if dims[0] != n - 1:
        multi_drop = True
        if not any("index 0" in f for f in flags):
            flags.append(f"first prefix has dimension {dims[0]}, not {n - 1}")
    for u in range(1, n + 1):
        t_u = next(s for s, d in enumerate(dims) if d <= n - u - 1)
        t_indices.append(t_u)
    return Filtration(tuple(t_indices), tuple(dims), multi_drop, tuple(flags))


@dataclass(frozen=True)
class GenericCombination:
    """Output of the generic-combination construction with its certificate."""

    polys: tuple[MultiPoly, ...]
    coefficients: tuple[tuple[int, ...], ...]
    attempts: int
    coefficient_bound: int
    seed: int
    verified_empty: bool

    def to_json(self) -> dict:
        return {
            "polys": [p.to_text() for p in self.polys],
            "coefficients": [list(row) for row in self.coefficients],
            "attempts": self.attempts,
            "coefficient_bound": self.coefficient_bound,
            "seed": self.seed,
            "verified_empty": self.verified_empty,
        }


GENERIC_RETRY_BUDGET = 16


def generic_combinations(
    X: Ideal,
    hypersurfaces: Sequence[MultiPoly],
    filtration: Filtration,
    seed: int,
    budget: Budget | None = None,
) -> GenericCombination:
    """n+1 random prefix combinations P_u = sum_{j<=t_u} c_{uj} Q_j whose
    common zero set misses X, verified by a projective emptiness check.

    Coefficients are drawn from {-B,...,B} with B doubling on every retry;
    the retry budget is 16 attempts.
    """
    if filtration.multi_drop:
        raise PreconditionError(
            "filtration has multi-step dimension drops; construction needs unit drops"
        )
    degs = {homogeneous_degree(f) for f in hypersurfaces}
    if None in degs or len(degs) != 1:
        raise PreconditionError("hypersurfaces must share one homogeneous degree")
    if not is_projectively_empty(
        Ideal.of(X.num_vars, tuple(X.gens) + tuple(hypersurfaces)), budget
    ):
        raise PreconditionError("the full family does not miss X")
    n = len(filtration.t_indices) - 1
    if filtration.t_indices[-1] >= len(hypersurfaces):
        raise PreconditionError("filtration indices exceed the family")
    rng = random.Random(seed)
    bound = 1
    last_error = "no attempt made"
    for attempt in range(1, GENERIC_RETRY_BUDGET + 1):
        rows: list[tuple[int, ...]] = []
        combos: list[MultiPoly] = []
        ok = True
        for u in range(n + 1):
            t_u = filtration.t_indices[u]
            coeffs = tuple(rng.randint(-bound, bound) for _ in range(t_u + 1))
            combo = MultiPoly.zero(X.num_vars)
            for c, f in zip(coeffs, hypersurfaces):
                if c:
                    combo = combo + f.scaled(c)
            if combo.is_zero:
                ok = False
                last_error = f"attempt {attempt}: combination {u} vanished"
                rows.append(coeffs)
                break
            rows.append(coeffs)
            combos.append(combo)
        if ok:
            candidate = Ideal.of(X.num_vars, tuple(X.gens) + tuple(combos))
            if is_projectively_empty(candidate, budget):
                return GenericCombination(
                    polys=tuple(combos),
                    coefficients=tuple(rows),
                    attempts=attempt,
                    coefficient_bound=bound,
                    seed=seed,
                    verified_empty=True,
                )
            last_error = f"attempt {attempt}: intersection with X nonempty"
        bound *= 2
    raise BudgetExceededError(
        f"no empty-intersection combination in {GENERIC_RETRY_BUDGET} attempts; {last_error}"
    )


@dataclass(frozen=True)
class Lemma32Result:
    lhs: Fraction
    rhs: float
    delta: Fraction
    holds: bool
    equality: bool

    def to_json(self) -> dict:
        return {
            "lhs": str(self.lhs),
            "rhs": self.rhs,
            "delta": str(self.delta),
            "holds": self.holds,
            "equality": self.equality,
        }


def lemma32_eval(t: Sequence[int], a: Sequence) -> Lemma32Result:
    """Product inequality: prod a_s^(t_{s+1}-t_s) <= (prod a_s)^delta with
    delta = max_s (t_s - t_0)/s, for nonincreasing a_s >= 1 and t_0 = 1.

    The comparison is decided exactly on rational inputs; rhs is reported as
    a float because the exponent delta is rational.
    """
    t = list(t)
    if len(t) < 2 or t[0] != 1:
        raise PreconditionError("need integers 1 = t_0 < t_1 < ...")
    if any(t[i] >= t[i + 1] for i in range(len(t) - 1)):
        raise PreconditionError("t must be strictly increasing")
    a = [Fraction(x) for x in a]
    if len(a) != len(t) - 1:
        raise PreconditionError("need one a value per t step")
    if any(a[i] < a[i + 1] for i in range(len(a) - 1)) or a[-1] < 1:
        raise PreconditionError("a must be nonincreasing and >= 1")
    n = len(a)
    delta = max(Fraction(t[s] - t[0], s) for s in range(1, n + 1))
    lhs = Fraction(1)
    for s in range(n):
        lhs *= a[s] ** (t[s + 1] - t[s])
    product = Fraction(1)
    for x in a:
        product *= x
    # exact comparison: lhs <= product^(p/q)  <=>  lhs^q <= product^p
    p, q = delta.numerator, delta.denominator
    holds = lhs**q <= product**p
    equality = lhs**q == product**p
    rhs = float(product) ** float(delta)
    if not holds:
        raise InternalCheckError("product inequality violated; transcription bug")
    return Lemma32Result(lhs, rhs, delta, holds, equality)
