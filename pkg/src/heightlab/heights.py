"""Heights of projective rational points, Weil functions, twisted heights.

Points are stored in canonical form: coprime integer coordinates with the
first nonzero coordinate positive.  With that normalization the
multiplicative height is just max |coordinate|, and it agrees with the
place-by-place product of coordinate norms.

The local Weil function of the divisor cut out by a homogeneous f is fixed
in the gauge

    lambda_{f,v}(P) = log( ||P||_v^deg(f) * ||f||_v / ||f(P)||_v ),

which includes the ||f||_v factor so that the sum over all places equals
deg(f)*h(P) + h(f) exactly -- no O(1) slack to calibrate.  A closed
subscheme's Weil function is the minimum over its defining divisors.

Points lying on a divisor raise typed errors rather than returning an
infinite proximity value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import (
    PointOnDivisorError,
    PointOnSubschemeError,
    PreconditionError,
)
from .polyalg import MultiPoly, PolySystem, homogeneous_degree, system_norm
from .qarith import (
    INFINITY,
    ExactLog,
    Place,
    PlaceSet,
    normalized_abs,
    support,
)


@dataclass(frozen=True)
class ProjPoint:
    """A point of P^N(Q) in canonical coprime-integer form."""

    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.coords or all(c == 0 for c in self.coords):
            raise PreconditionError("projective point needs a nonzero coordinate")
        g = 0
        for c in self.coords:
            g = gcd(g, c)
        first = next(c for c in self.coords if c != 0)
        if g != 1 or first < 0:
            raise PreconditionError("coordinates not in canonical form")

    @classmethod
    def of(cls, coords) -> "ProjPoint":
        """Canonicalize arbitrary rational coordinates."""
        fracs = [Fraction(c) for c in coords]
        if all(f == 0 for f in fracs):
            raise PreconditionError("projective point needs a nonzero coordinate")
        denom_lcm = 1
        for f in fracs:
            denom_lcm = denom_lcm * f.denominator // gcd(denom_lcm, f.denominator)
        ints = [int(f * denom_lcm) for f in fracs]
        g = 0
        for c in ints:
            g = gcd(g, c)
        ints = [c // g for c in ints]
        first = next(c for c in ints if c != 0)
        if first < 0:
            ints = [-c for c in ints]
        return cls(tuple(ints))

    @classmethod
    def parse(cls, text: str) -> "ProjPoint":
        sep = ":" if ":" in text else ","
        return cls.of(Fraction(part.strip()) for part in text.split(sep))

    @property
    def ambient_dim(self) -> int:
        return len(self.coords) - 1

    def local_norm(self, v: Place) -> Fraction:
        """||P||_v = max_i ||x_i||_v over the nonzero coordinates."""
        return max(normalized_abs(c, v) for c in self.coords if c != 0)

    def coordinate_support(self) -> PlaceSet:
        result = PlaceSet.of([INFINITY])
        for c in self.coords:
            if c != 0:
                result = result.union(support(c))
        return result

    def to_text(self) -> str:
        return ":".join(str(c) for c in self.coords)

    def __str__(self) -> str:
        return self.to_text()


def proj_height(point: ProjPoint) -> ExactLog:
    """Absolute logarithmic height; the stored value is max |coordinate|."""
    return ExactLog(Fraction(max(abs(c) for c in point.coords)))


def proj_height_by_places(point: ProjPoint) -> ExactLog:
    """The same height assembled place by place (independent route)."""
    total = Fraction(1)
    for v in point.coordinate_support():
        total *= point.local_norm(v)
    return ExactLog(total)


def weil_divisor(f: MultiPoly, v: Place, point: ProjPoint) -> ExactLog:
    """Local Weil function of div(f) at the point, in the exact gauge."""
    deg = homogeneous_degree(f)
    if deg is None:
        raise PreconditionError("Weil functions need a homogeneous polynomial")
    value = f.evaluate(point.coords)
    if value == 0:
        raise PointOnDivisorError(f"{point} lies on the divisor of {f}")
    mult = (
        point.local_norm(v) ** deg
        * system_norm([f], v, "max")
        / normalized_abs(value, v)
    )
    return ExactLog(mult)


@dataclass(frozen=True)
class SubschemeWeil:
    """Weil value of a closed subscheme plus the component flags.

    `skipped` lists the defining divisors the point happens to lie on; their
    (infinite) local values are excluded from the minimum.
    """

    value: ExactLog
    skipped: tuple[int, ...]


def weil_subscheme(
    fs: list[MultiPoly], v: Place, point: ProjPoint
) -> SubschemeWeil:
    """min_i lambda_{div f_i, v}(P) over the divisors not containing P."""
    if not fs:
        raise PreconditionError("empty defining family")
    values: list[ExactLog] = []
    skipped: list[int] = []
    for i, f in enumerate(fs):
        try:
            values.append(weil_divisor(f, v, point))
        except PointOnDivisorError:
            skipped.append(i)
    if not values:
        raise PointOnSubschemeError(f"{point} lies on the subscheme")
    return SubschemeWeil(min(values), tuple(skipped))


def approx_product(
    system: PolySystem, places: PlaceSet, point: ProjPoint
) -> tuple[Fraction, int]:
    """Exact multiplicative form of the approximation sum.

    Returns (V, D) with the sum equal to (1/D) * log V, where D is the lcm
    of the system degrees.  Raises if the point lies on any divisor.
    """
    if len(places) == 0:
        raise PreconditionError("empty place set")
    deg_lcm = 1
    for d in system.degrees:
        deg_lcm = deg_lcm * d // gcd(deg_lcm, d)
    V = Fraction(1)
    for v in places:
        norm_p = point.local_norm(v)
        for f, d in zip(system.polys, system.degrees):
            value = f.evaluate(point.coords)
            if value == 0:
                raise PointOnDivisorError(f"{point} lies on the divisor of {f}")
            ratio = normalized_abs(value, v) / norm_p**d
            V *= ratio ** (deg_lcm // d)
    return V, deg_lcm


def approx_sum(system: PolySystem, places: PlaceSet, point: ProjPoint) -> float:
    """sum_{v in S} sum_i (1/deg f_i) log( ||f_i(P)||_v / ||P||_v^deg f_i )."""
    V, deg_lcm = approx_product(system, places, point)
    return (math.log(V.numerator) - math.log(V.denominator)) / deg_lcm


@dataclass(frozen=True)
class WeightAssignment:
    """Per-place coordinate weights c_{iv} >= 0 with finite support.

    Nonnegativity and finite support are structural; the unit weight budget
    sum_v max_i c_{iv} <= 1 is only demanded by the Chow-weight aggregate and
    is checked there via `require_unit_budget` (twisted heights are defined
    for any nonnegative weights).
    """

    ambient_dim: int
    per_place: tuple[tuple[Place, tuple[Fraction, ...]], ...]

    def __post_init__(self) -> None:
        seen: set[Place] = set()
        for v, vec in self.per_place:
            if v in seen:
                raise PreconditionError(f"duplicate place {v}")
            seen.add(v)
            if len(vec) != self.ambient_dim + 1:
                raise PreconditionError("weight vector has wrong length")
            if any(c < 0 for c in vec):
                raise PreconditionError("weights must be nonnegative")

    def max_weight_total(self) -> Fraction:
        return sum((max(vec) for _, vec in self.per_place), Fraction(0))

    def require_unit_budget(self) -> None:
        total = self.max_weight_total()
        if total > 1:
            raise PreconditionError(
                f"sum of per-place weight maxima is {total}, exceeding 1"
            )

    @classmethod
    def of(cls, ambient_dim: int, mapping) -> "WeightAssignment":
        items = []
        for v, vec in mapping.items() if hasattr(mapping, "items") else mapping:
            vec = tuple(Fraction(c) for c in vec)
            if any(vec):
                items.append((v, vec))
        items.sort(key=lambda item: item[0].sort_key())
        return cls(ambient_dim, tuple(items))

    @classmethod
    def zero(cls, ambient_dim: int) -> "WeightAssignment":
        return cls(ambient_dim, ())

    def vector_at(self, v: Place) -> tuple[Fraction, ...]:
        for place, vec in self.per_place:
            if place == v:
                return vec
        return (Fraction(0),) * (self.ambient_dim + 1)

    def places(self) -> list[Place]:
        return [v for v, _ in self.per_place]

    def total(self) -> Fraction:
        return sum((sum(vec) for _, vec in self.per_place), Fraction(0))


def twisted_height(point: ProjPoint, weights: WeightAssignment, q_base: float) -> float:
    """log of the twisted height prod_v max_i ||y_i||_v * Q^{c_{iv}}.

    Exact rational data and the transcendental Q^c genuinely mix here, so the
    result is a float; with all weights zero it reduces to the standard
    height.
    """
    if q_base <= 1:
        raise PreconditionError("twisted height needs Q > 1")
    if weights.ambient_dim != point.ambient_dim:
        raise PreconditionError("weight vector dimension mismatch")
    places = point.coordinate_support()
    for v in weights.places():
        places = places.union(PlaceSet.of([v]))
    log_q = math.log(q_base)
    total = 0.0
    for v in places:
        vec = weights.vector_at(v)
        best = None
        for coord, c in zip(point.coords, vec):
            if coord == 0:
                continue
            term = math.log(normalized_abs(coord, v)) + float(c) * log_q
            best = term if best is None else max(best, term)
        total += best
    return total
