"""Audit harness for the approximation inequality over enumerated points.

For every point of bounded height on X and off all divisors the harness
computes the approximation sum, the height and their ratio, and flags the
point when the sum drops below -(exponent + delta) * h.  Flag evaluation is
two-phase: a fast float pass nominates candidates (with a safety margin),
then the exact multiplicative predicate

    V^q * H^(p * L) <= 1,   exponent + delta = p/q,  L = lcm of degrees,

confirms them, so no row is flagged on float rounding alone.

Reports are deterministic: identical configurations produce byte-identical
JSON.  For large enumerations only the flagged rows and the most extreme
ratios are retained in the report; a streaming sink receives every row when
a full CSV dump is requested.
"""

from __future__ import annotations

import heapq
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from ..errors import PreconditionError
from ..groebner import GradedRevLex, Ideal, groebner_basis, is_projectively_empty
from ..heights import ProjPoint
from ..polyalg import MultiPoly, PolySystem, parse_poly
from ..qarith import PlaceSet, normalized_abs, padic_valuation, parse_rational
from .points import enumerate_points

KEEP_ALL_THRESHOLD = 5000
EXTREME_ROWS_KEPT = 20
ON_DIVISOR_LISTED = 100
_FLOAT_MARGIN = 1e-9


@dataclass(frozen=True)
class AuditConfig:
    """Inputs of one audit run.

    `exponent` is the coefficient alpha(n+1) of the membership predicate;
    the flag threshold is exponent + delta.  The optional height floor is
    the precomputed log of A_3 * H, echoed in the summary (never used as a
    filter: it exceeds any desk-scale height).
    """

    system: PolySystem
    variety: Ideal | None
    places: PlaceSet
    exponent: Fraction
    delta: Fraction
    height_bound: int
    seed: int = 0
    log_height_floor: float | None = None

    def __post_init__(self) -> None:
        if self.exponent <= 0:
            raise PreconditionError("exponent must be positive")
        if self.delta <= 0:
            raise PreconditionError("delta must be positive")
        if self.height_bound < 1:
            raise PreconditionError("height bound must be >= 1")
        if len(self.places) == 0:
            raise PreconditionError("place set must be nonempty")
        nv = self.system.num_vars
        if self.variety is not None and self.variety.num_vars != nv:
            raise PreconditionError("variety and system in different rings")
        ambient = self.variety if self.variety is not None else Ideal.of(nv, [])
        gb = groebner_basis(ambient, GradedRevLex())
        for f in self.system.polys:
            if gb.contains(f):
                raise PreconditionError(f"{f} vanishes identically on X")
        joint = Ideal.of(nv, tuple(ambient.gens) + tuple(self.system.polys))
        if not is_projectively_empty(joint):
            raise PreconditionError("system has a common zero on X")

    @classmethod
    def from_json(cls, data: dict) -> "AuditConfig":
        nv = int(data["vars"])
        system = PolySystem.of(parse_poly(t, nv) for t in data["system"])
        variety = Ideal.from_json(data["X"]) if data.get("X") else None
        return cls(
            system=system,
            variety=variety,
            places=PlaceSet.parse(data["S"]),
            exponent=parse_rational(str(data["exponent"])),
            delta=parse_rational(str(data["delta"])),
            height_bound=int(data["bound"]),
            seed=int(data.get("seed", 0)),
            log_height_floor=data.get("log_height_floor"),
        )


@dataclass(frozen=True)
class AuditRow:
    point: ProjPoint
    h_mult: int
    h: float
    lhs: float
    ratio: float | None
    flagged: bool

    def to_json(self) -> dict:
        return {
            "point": self.point.to_text(),
            "h_mult": str(self.h_mult),
            "h": self.h,
            "lhs": self.lhs,
            "ratio": self.ratio,
            "flagged": self.flagged,
        }


@dataclass(frozen=True)
class AuditReport:
    config_echo: dict
    summary: dict
    rows: tuple[AuditRow, ...]
    on_divisor: tuple[str, ...]

    def to_json(self) -> dict:
        return {
            "config": self.config_echo,
            "summary": self.summary,
            "rows": [r.to_json() for r in self.rows],
            "on_divisor": list(self.on_divisor),
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


def _integerized(system: PolySystem) -> list[tuple[list[tuple[int, tuple[int, ...]]], int]]:
    """Compile each polynomial to integer coefficients plus the scale used.

    Only zero detection and norm bookkeeping use the rescaled values; all
    reported quantities refer to the original system.
    """
    out = []
    for f in system.polys:
        scale = 1
        for c in f.terms.values():
            scale = scale * c.denominator // math.gcd(scale, c.denominator)
        compiled = [
            (int(c * scale), mono) for mono, c in sorted(f.terms.items())
        ]
        out.append((compiled, scale))
    return out


def _eval_int(compiled: list[tuple[int, tuple[int, ...]]], coords: tuple[int, ...]) -> int:
    total = 0
    for c, mono in compiled:
        term = c
        for x, e in zip(coords, mono):
            if e:
                term *= x**e
        total += term
    return total


def _exact_flag(
    system: PolySystem,
    places: PlaceSet,
    point: ProjPoint,
    threshold: Fraction,
    values: list[Fraction],
) -> bool:
    """Exact membership predicate lhs <= -threshold * h(P).

    `values` are the exact f_i(P).  Scaled by L = lcm(degrees), the
    predicate becomes V^q * H^(p L) <= 1 over the rationals.
    """
    deg_lcm = 1
    for d in system.degrees:
        deg_lcm = deg_lcm * d // math.gcd(deg_lcm, d)
    h_mult = max(abs(c) for c in point.coords)
    V = Fraction(1)
    for v in places:
        norm_p = point.local_norm(v)
        for value, d in zip(values, system.degrees):
            ratio = normalized_abs(value, v) / norm_p**d
            V *= ratio ** (deg_lcm // d)
    p, q = threshold.numerator, threshold.denominator
    return V**q * Fraction(h_mult) ** (p * deg_lcm) <= 1


def audit(
    cfg: AuditConfig, row_sink: Callable[[AuditRow], None] | None = None
) -> AuditReport:
    """Run the audit; returns the retained rows plus a summary.

    Every evaluated row is handed to `row_sink` when given (for streaming
    CSV dumps); the report itself retains all rows for small runs and the
    flagged plus most extreme rows for large ones.
    """
    system = cfg.system
    nv = system.num_vars
    threshold = cfg.exponent + cfg.delta
    int_polys = _integerized(system)
    finite_primes = [v.prime for v in cfg.places if not v.is_infinite]
    use_infinity = any(v.is_infinite for v in cfg.places)

    float_threshold = float(threshold)
    degrees = system.degrees
    scale_logs = [math.log(scale) for _, scale in int_polys]
    scale_vals = [
        {p: padic_valuation(scale, p) for p in finite_primes} if finite_primes else {}
        for _, scale in int_polys
    ]
    log_primes = {p: math.log(p) for p in finite_primes}

    all_rows: list[AuditRow] = []
    flagged_rows: list[tuple[int, AuditRow]] = []
    # max-heap (via negation) of the EXTREME_ROWS_KEPT smallest ratios
    extreme_heap: list[tuple[float, int, AuditRow]] = []
    on_divisor: list[str] = []
    total = 0
    evaluated = 0
    min_ratio: float | None = None
    min_ratio_point: str | None = None
    max_ratio: float | None = None
    keep_all = True

    for seq, point in enumerate(
        enumerate_points(nv - 1, cfg.height_bound, cfg.variety)
    ):
        total += 1
        coords = point.coords
        values = [_eval_int(compiled, coords) for compiled, _ in int_polys]
        if any(val == 0 for val in values):
            if len(on_divisor) < ON_DIVISOR_LISTED:
                on_divisor.append(point.to_text())
            continue
        evaluated += 1
        h_mult = max(abs(c) for c in coords)
        h = math.log(h_mult)
        lhs = 0.0
        if use_infinity:
            for i, d in enumerate(degrees):
                lhs += (math.log(abs(values[i])) - scale_logs[i]) / d - h
        for prime in finite_primes:
            log_p = log_primes[prime]
            for i, d in enumerate(degrees):
                vp = padic_valuation(values[i], prime) - scale_vals[i][prime]
                lhs -= vp * log_p / d
        ratio = lhs / h if h > 0 else None
        flagged = False
        if h > 0 and lhs <= -float_threshold * h + _FLOAT_MARGIN:
            original = [
                Fraction(val, scale) for val, (_, scale) in zip(values, int_polys)
            ]
            flagged = _exact_flag(system, cfg.places, point, threshold, original)
        row = AuditRow(point, h_mult, h, lhs, ratio, flagged)
        if row_sink is not None:
            row_sink(row)
        if flagged:
            flagged_rows.append((seq, row))
        if ratio is not None:
            if min_ratio is None or ratio < min_ratio:
                min_ratio = ratio
                min_ratio_point = point.to_text()
            if max_ratio is None or ratio > max_ratio:
                max_ratio = ratio
            entry = (-ratio, -seq, row)
            if len(extreme_heap) < EXTREME_ROWS_KEPT:
                heapq.heappush(extreme_heap, entry)
            elif entry > extreme_heap[0]:
                heapq.heapreplace(extreme_heap, entry)
        if keep_all:
            all_rows.append(row)
            if len(all_rows) > KEEP_ALL_THRESHOLD:
                keep_all = False
                all_rows = []

    if keep_all:
        rows = tuple(all_rows)
    else:
        by_seq: dict[int, AuditRow] = {}
        for _, neg_seq, row in extreme_heap:
            by_seq[-neg_seq] = row
        for seq_f, row in flagged_rows:
            by_seq[seq_f] = row
        rows = tuple(
            sorted(
                by_seq.values(),
                key=lambda r: (
                    r.ratio if r.ratio is not None else float("inf"),
                    r.point.coords,
                ),
            )
        )

    config_echo = {
        "system": [f.to_text() for f in system.polys],
        "vars": nv,
        "X": cfg.variety.to_json() if cfg.variety is not None else None,
        "S": [str(v) for v in cfg.places],
        "exponent": str(cfg.exponent),
        "delta": str(cfg.delta),
        "bound": cfg.height_bound,
        "seed": cfg.seed,
    }
    summary = {
        "points": total,
        "evaluated": evaluated,
        "on_divisor": total - evaluated,
        "flagged": len(flagged_rows),
        "min_ratio": min_ratio,
        "min_ratio_point": min_ratio_point,
        "max_ratio": max_ratio,
        "threshold": str(threshold),
        "log_height_floor": cfg.log_height_floor,
        "rows_retained": "all" if keep_all else "flagged+extremes",
    }
    return AuditReport(
        config_echo=config_echo,
        summary=summary,
        rows=rows,
        on_divisor=tuple(on_divisor),
    )


def row_to_csv(row: AuditRow) -> str:
    return "%s,%s,%r,%r,%s" % (
        row.point.to_text(),
        row.h_mult,
        row.lhs,
        row.ratio,
        "true" if row.flagged else "false",
    )


CSV_HEADER = "point,h_mult,lhs,ratio,flagged"
