"""Proof-step pipeline: re-embedding, image variety, height inequalities.

From a system f_0,...,f_m on X the pipeline forms g_i = f_i^(L/deg f_i)
with L the lcm of the degrees, deduplicates them, maps X to Y inside P^R,
and verifies numerically:

  * the image preserves dimension and its degree stays below d * L^n,
  * h_1(1, g_0,...,g_R) <= 6 L^2 C m s H,
  * h(Y) (the height of the Chow form of Y) <= 25 n m d L^(n+2) C s H,
  * E_Y(c) >= 1/(alpha(n+1)) for seeded random weight assignments that obey
    the nonnegativity, finite-support and unit-sum side conditions.

The weight-aggregate comparison is exact (rational against rational); the
two height inequalities compare floats whose margins are many orders of
magnitude.  Violations raise InternalCheckError: they would mean a formula
was transcribed wrongly.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from ..bounds import ProblemParams, alpha
from ..chow import chow_form, chow_weight_aggregate, image_variety
from ..errors import InternalCheckError, PreconditionError
from ..geometry import DivisorFamily, distributive_constant
from ..groebner import Budget, Ideal, degree, projective_dimension
from ..heights import WeightAssignment
from ..polyalg import MultiPoly, PolySystem, parse_poly, system_height
from ..qarith import PlaceSet, parse_rational


@dataclass(frozen=True)
class ProofCheckConfig:
    variety: Ideal
    system: PolySystem
    params: ProblemParams
    places: PlaceSet
    seed: int = 0
    samples: int = 50

    @classmethod
    def from_json(cls, data: dict) -> "ProofCheckConfig":
        nv = int(data["vars"])
        variety = Ideal.from_json(data["X"]) if data.get("X") else Ideal.of(nv, [])
        system = PolySystem.of(parse_poly(t, nv) for t in data["system"])
        p = data["params"]
        params = ProblemParams(
            n=int(p["n"]),
            m=int(p["m"]),
            d=int(p["d"]),
            Delta=int(p["Delta"]),
            delta_x=parse_rational(str(p["delta_x"])),
            delta=parse_rational(str(p["delta"])),
            C=int(p.get("C", 1)),
            s=int(p.get("s", 1)),
            h_value=float(p.get("H", 0.0)),
        )
        return cls(
            variety=variety,
            system=system,
            params=params,
            places=PlaceSet.parse(data["S"]),
            seed=int(data.get("seed", 0)),
            samples=int(data.get("samples", 50)),
        )


@dataclass(frozen=True)
class ProofCheckReport:
    R: int
    map_degree: int
    dim_y: int
    degree_y: int
    h_y: float
    h1_system: float
    h_x: float
    H: float
    ineq_system_height: tuple[float, float, bool]
    ineq_variety_height: tuple[float, float, bool]
    alpha_np1: Fraction
    aggregate_bound: Fraction
    min_aggregate: Fraction
    samples: int
    image: Ideal

    def to_json(self) -> dict:
        return {
            "R": self.R,
            "map_degree": self.map_degree,
            "dim_Y": self.dim_y,
            "degree_Y": self.degree_y,
            "h_Y": self.h_y,
            "h1_system": self.h1_system,
            "h_X": self.h_x,
            "H": self.H,
            "ineq_system_height": {
                "lhs": self.ineq_system_height[0],
                "rhs": self.ineq_system_height[1],
                "holds": self.ineq_system_height[2],
            },
            "ineq_variety_height": {
                "lhs": self.ineq_variety_height[0],
                "rhs": self.ineq_variety_height[1],
                "holds": self.ineq_variety_height[2],
            },
            "alpha_np1": str(self.alpha_np1),
            "aggregate_bound": str(self.aggregate_bound),
            "min_aggregate": str(self.min_aggregate),
            "samples": self.samples,
            "Y": self.image.to_json(),
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def proof_inequality_report(
    cfg: ProofCheckConfig, budget: Budget | None = None
) -> ProofCheckReport:
    """Run the full pipeline; every asserted inequality must hold."""
    X = cfg.variety
    system = cfg.system
    params = cfg.params
    nv = X.num_vars
    ambient_dim = nv - 1

    n = projective_dimension(X, budget)
    if n != params.n:
        raise PreconditionError(f"params.n = {params.n}, computed dim X = {n}")
    d = degree(X, budget)
    if d != params.d:
        raise PreconditionError(f"params.d = {params.d}, computed deg X = {d}")
    if len(system.polys) != params.m + 1:
        raise PreconditionError("params.m does not match the system size")
    if len(cfg.places) != params.s:
        raise PreconditionError("params.s does not match the place set")
    deg_lcm = 1
    for deg_i in system.degrees:
        deg_lcm = deg_lcm * deg_i // math.gcd(deg_lcm, deg_i)
    if deg_lcm != params.Delta:
        raise PreconditionError(
            f"params.Delta = {params.Delta}, lcm of degrees = {deg_lcm}"
        )

    family = DivisorFamily.of(X, [[f] for f in system.polys], "divisor", budget)
    delta_div = distributive_constant(family).value
    if delta_div > params.delta_x:
        raise PreconditionError(
            f"family distributive constant {delta_div} exceeds delta_x = {params.delta_x}"
        )

    maps: list[MultiPoly] = []
    for f, deg_i in zip(system.polys, system.degrees):
        g = f ** (deg_lcm // deg_i)
        if g not in maps:
            maps.append(g)
    R = len(maps) - 1
    if R > params.C * (params.m + 1) * params.s - 1:
        raise PreconditionError("more distinct map components than C(m+1)s - 1")
    if R < 1:
        raise PreconditionError("need at least two distinct map components")

    Y = image_variety(X, maps, budget)
    dim_y = projective_dimension(Y, budget)
    form_y = chow_form(Y, dim_y, budget)
    deg_y = form_y.per_block_degree

    form_x = chow_form(X, n, budget)
    h_x = system_height([form_x.poly], "h").log
    h_y = system_height([form_y.poly], "h").log
    one = MultiPoly.constant(nv, 1)
    h1_system = system_height([one] + maps, "h1").log
    max_system = max(
        system_height([one, f], "h").log for f in system.polys
    )
    H = math.log(ambient_dim + params.m) + h_x + max_system

    C, m, s = params.C, params.m, params.s
    rhs_system = 6 * deg_lcm**2 * C * m * s * H
    rhs_variety = 25 * n * m * d * deg_lcm ** (n + 2) * C * s * H
    ineq_system = (h1_system, rhs_system, h1_system <= rhs_system)
    ineq_variety = (h_y, rhs_variety, h_y <= rhs_variety)
    if not ineq_system[2]:
        raise InternalCheckError(
            f"system height inequality failed: {h1_system} > {rhs_system}"
        )
    if not ineq_variety[2]:
        raise InternalCheckError(
            f"variety height inequality failed: {h_y} > {rhs_variety}"
        )

    a_np1 = alpha(params) * (params.n + 1)
    bound = 1 / a_np1
    rng = random.Random(cfg.seed)
    min_aggregate: Fraction | None = None
    for _ in range(cfg.samples):
        total = 0
        while total == 0:
            raw = {
                v: [rng.randint(0, 9) for _ in range(R + 1)] for v in cfg.places
            }
            total = sum(sum(vec) for vec in raw.values())
        assignment = WeightAssignment.of(
            R, {v: [Fraction(w, total) for w in vec] for v, vec in raw.items()}
        )
        aggregate = chow_weight_aggregate(form_y, assignment)
        if aggregate < bound:
            raise InternalCheckError(
                f"weight aggregate {aggregate} fell below 1/(alpha(n+1)) = {bound}"
            )
        if min_aggregate is None or aggregate < min_aggregate:
            min_aggregate = aggregate

    return ProofCheckReport(
        R=R,
        map_degree=deg_lcm,
        dim_y=dim_y,
        degree_y=deg_y,
        h_y=h_y,
        h1_system=h1_system,
        h_x=h_x,
        H=H,
        ineq_system_height=ineq_system,
        ineq_variety_height=ineq_variety,
        alpha_np1=a_np1,
        aggregate_bound=bound,
        min_aggregate=min_aggregate if min_aggregate is not None else bound,
        samples=cfg.samples,
        image=Y,
    )
