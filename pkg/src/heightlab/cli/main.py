"""Argparse command-line interface.

Exit codes: 0 success, 2 hypothesis or precondition failure, 3 resource
budget exceeded, 4 internal assertion (an identity the library guarantees
was violated).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from ..bounds import (
    ProblemParams,
    alpha,
    check_proof_identities,
    covering_check,
    covering_set,
    ef_constants,
    theorem_constants,
)
from ..chow import (
    ChowForm,
    ChowWeightVector,
    chow_form,
    chow_weight,
    image_variety,
    thm22_report,
)
from ..errors import (
    BudgetExceededError,
    HeightlabError,
    InternalCheckError,
    PreconditionError,
)
from ..geometry import (
    DivisorFamily,
    dimension_filtration,
    distributive_constant,
    generic_combinations,
    lemma32_eval,
    subgeneral_position_check,
)
from ..groebner import Budget, Ideal, degree, projective_dimension
from ..heights import ProjPoint, proj_height
from ..polyalg import parse_poly, system_height, system_norm
from ..qarith import parse_place, parse_rational
from .audit import CSV_HEADER, AuditConfig, audit, row_to_csv
from .points import enumerate_points
from .proofcheck import ProofCheckConfig, proof_inequality_report


def _load_json(path: str) -> dict:
    if path == "-":
        return json.load(sys.stdin)
    return json.loads(Path(path).read_text())


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, indent=2))
    else:
        for line in text_lines:
            print(line)


def _cmd_height_point(args) -> None:
    point = ProjPoint.parse(args.point)
    h = proj_height(point)
    _emit(
        args,
        {"point": point.to_text(), "mult": str(h.mult), "log": h.log},
        [f"point {point}", f"multiplicative height {h.mult}", f"h = {h.log}"],
    )


def _cmd_height_poly(args) -> None:
    polys = [parse_poly(t, args.vars) for t in args.poly]
    h = system_height(polys, args.variant)
    _emit(
        args,
        {"variant": args.variant, "mult": str(h.mult), "log": h.log},
        [f"{args.variant} multiplicative value {h.mult}", f"log {h.log}"],
    )


def _cmd_norms(args) -> None:
    polys = [parse_poly(t, args.vars) for t in args.poly]
    value = system_norm(polys, parse_place(args.place), args.variant)
    _emit(args, {"norm": str(value)}, [f"norm {value}"])


def _cmd_dimension(args) -> None:
    ideal = Ideal.from_json(_load_json(args.ideal))
    dim = projective_dimension(ideal, args.budget)
    _emit(args, {"dimension": dim}, [f"projective dimension {dim}"])


def _cmd_degree(args) -> None:
    ideal = Ideal.from_json(_load_json(args.ideal))
    value = degree(ideal, args.budget)
    _emit(args, {"degree": value}, [f"degree {value}"])


def _cmd_distconst(args) -> None:
    family = DivisorFamily.from_json(_load_json(args.family), args.budget)
    report = distributive_constant(family)
    _emit(
        args,
        report.to_json(),
        [f"distributive constant {report.value}", f"witness {list(report.witness)}"],
    )


def _cmd_filtration(args) -> None:
    data = _load_json(args.family)
    ideal = Ideal.from_json(data["X"])
    divisors = [parse_poly(t, ideal.num_vars) for member in data["members"] for t in member]
    filt = dimension_filtration(ideal, divisors, args.budget)
    _emit(
        args,
        filt.to_json(),
        [
            f"t indices {list(filt.t_indices)}",
            f"prefix dims {list(filt.prefix_dims)}",
            f"multi-drop {filt.multi_drop}",
        ],
    )


def _cmd_lemma31(args) -> None:
    data = _load_json(args.family)
    ideal = Ideal.from_json(data["X"])
    hypersurfaces = [
        parse_poly(t, ideal.num_vars) for member in data["members"] for t in member
    ]
    filt = dimension_filtration(ideal, hypersurfaces, args.budget)
    combo = generic_combinations(ideal, hypersurfaces, filt, args.seed, args.budget)
    _emit(
        args,
        combo.to_json(),
        [
            f"combinations {[str(p) for p in combo.polys]}",
            f"attempts {combo.attempts}",
            "verified empty: yes",
        ],
    )


def _cmd_lemma32(args) -> None:
    t = [int(x) for x in args.t.split(",")]
    a = [parse_rational(x) for x in args.a.split(",")]
    result = lemma32_eval(t, a)
    _emit(
        args,
        result.to_json(),
        [
            f"lhs {result.lhs}",
            f"rhs {result.rhs}",
            f"delta {result.delta}",
            f"equality {result.equality}",
        ],
    )


def _cmd_chow_form(args) -> None:
    ideal = Ideal.from_json(_load_json(args.ideal))
    form = chow_form(ideal, args.dim, args.budget)
    _emit(
        args,
        form.to_json(),
        [
            f"per-block degree {form.per_block_degree}",
            f"form {form.poly.to_text(form.var_names())}",
        ],
    )


def _cmd_chow_weight(args) -> None:
    form = ChowForm.from_json(_load_json(args.form))
    c = ChowWeightVector.of(parse_rational(x) for x in args.c.split(","))
    value = chow_weight(form, c)
    _emit(args, {"weight": str(value)}, [f"Chow weight {value}"])


def _cmd_thm22(args) -> None:
    data = _load_json(args.config)
    ideal = Ideal.from_json(data["Y"])
    c = ChowWeightVector.of(parse_rational(str(x)) for x in data["c"])
    delta = parse_rational(str(data["delta"])) if data.get("delta") else None
    report = thm22_report(
        ideal,
        [int(i) for i in data["indices"]],
        c,
        data["mode"],
        delta=delta,
        budget=args.budget,
    )
    _emit(
        args,
        report.to_json(),
        [
            f"lhs {report.lhs} >= rhs {report.rhs}",
            f"delta(family) {report.delta_family}",
            f"equality {report.equality}",
        ],
    )


def _cmd_image(args) -> None:
    data = _load_json(args.config)
    ideal = Ideal.from_json(data["X"])
    maps = [parse_poly(t, ideal.num_vars) for t in data["maps"]]
    image = image_variety(ideal, maps, args.budget)
    _emit(
        args,
        image.to_json(),
        [f"image ideal: {[str(g) for g in image.gens] or ['(0)']}"],
    )


def _cmd_bounds(args) -> None:
    params = ProblemParams(
        n=args.n,
        m=args.m,
        d=args.d,
        Delta=args.Delta,
        delta_x=parse_rational(args.delta_x),
        delta=parse_rational(args.delta),
        C=args.C,
        s=args.s,
        h_value=args.H,
    )
    bounds = theorem_constants(params)
    D_prime = params.d * params.Delta**params.n
    R_prime = params.C * (params.m + 1) * params.s - 1
    beta = bounds.alpha * (params.n + 1) + 1
    ef = ef_constants(
        params.n, D_prime, max(R_prime, 1), params.delta / (2 * beta**2)
    )
    payload = {
        "alpha": str(bounds.alpha),
        "A2": str(bounds.A2),
        "logA1": bounds.log_A1,
        "logA3": bounds.log_A3,
        "B2": str(ef.B2),
        "logB1": ef.log_B1,
        "logB3": ef.log_B3,
        "H": params.h_value,
        "T_read_as_floor": True,
    }
    if args.check:
        report = check_proof_identities(params)
        payload["identities"] = report.to_json()
    _emit(args, payload, [f"{k} = {v}" for k, v in payload.items()])


def _cmd_covering_make(args) -> None:
    W = covering_set(args.q, parse_rational(args.theta))
    if args.csv:
        print(",".join(f"c{i}" for i in range(args.q)))
        for row in W.tuples:
            print(",".join(str(c) for c in row))
        return
    payload = W.to_json()
    _emit(
        args,
        payload,
        [
            f"mesh {W.mesh}, cardinality {W.cardinality}",
            f"stated bound {W.stated_cardinality_bound():.3f}"
            + (" (exceeded)" if W.exceeds_stated_bound() else ""),
        ],
    )


def _cmd_covering_check(args) -> None:
    W = covering_set(args.q, parse_rational(args.theta))
    A = [parse_rational(x) for x in args.deficits.split(",")]
    witness = covering_check(W, A, parse_rational(args.lam))
    _emit(
        args,
        {"witness": [str(c) for c in witness]},
        [f"witness {tuple(str(c) for c in witness)}"],
    )


def _cmd_enumerate(args) -> None:
    variety = Ideal.from_json(_load_json(args.variety)) if args.variety else None
    count = 0
    for point in enumerate_points(args.ambient, args.bound, variety):
        count += 1
        if not args.count_only:
            print(point.to_text())
    if args.count_only:
        print(count)


def _cmd_audit(args) -> None:
    cfg = AuditConfig.from_json(_load_json(args.config))
    sink = None
    csv_file = None
    if args.csv:
        csv_file = open(args.csv, "w")
        csv_file.write(CSV_HEADER + "\n")

        def sink(row):
            csv_file.write(row_to_csv(row) + "\n")

    try:
        report = audit(cfg, row_sink=sink)
    finally:
        if csv_file is not None:
            csv_file.close()
    text = report.to_json_text()
    if args.out:
        Path(args.out).write_text(text)
    if args.json or not args.out:
        print(text)
    else:
        print(f"audit written to {args.out}")
        print(json.dumps(report.summary, sort_keys=True, indent=2))


def _cmd_proofcheck(args) -> None:
    cfg = ProofCheckConfig.from_json(_load_json(args.config))
    report = proof_inequality_report(cfg, args.budget)
    print(report.to_json_text())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heightlab",
        description="Exact heights, Chow weights and subspace-theorem constants over Q.",
    )
    parser.add_argument("--json", action="store_true", help="emit JSON output")
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized steps")
    parser.add_argument(
        "--budget",
        type=Budget.parse,
        default=None,
        metavar="PAIRS,DEG",
        help="Groebner budget: max S-pairs, max S-pair degree",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    height = sub.add_parser("height", help="heights of points and systems")
    height_sub = height.add_subparsers(dest="subcommand", required=True)
    hp = height_sub.add_parser("point")
    hp.add_argument("point", help='coordinates "a0,a1,...,aN"')
    hp.set_defaults(func=_cmd_height_point)
    hpoly = height_sub.add_parser("poly")
    hpoly.add_argument("poly", nargs="+", help="polynomial text")
    hpoly.add_argument("--vars", type=int, required=True)
    hpoly.add_argument("--variant", choices=["h", "h1"], default="h")
    hpoly.set_defaults(func=_cmd_height_poly)

    norms = sub.add_parser("norms", help="coefficient norms at one place")
    norms.add_argument("poly", nargs="+")
    norms.add_argument("--vars", type=int, required=True)
    norms.add_argument("--place", required=True, help='"inf" or a prime')
    norms.add_argument("--variant", choices=["max", "sum"], default="max")
    norms.set_defaults(func=_cmd_norms)

    dim = sub.add_parser("dimension", help="projective dimension of an ideal")
    dim.add_argument("ideal", help="ideal JSON file or -")
    dim.set_defaults(func=_cmd_dimension)

    deg = sub.add_parser("degree", help="degree of a projective variety")
    deg.add_argument("ideal")
    deg.set_defaults(func=_cmd_degree)

    dist = sub.add_parser("distconst", help="distributive constant of a family")
    dist.add_argument("family", help="family JSON file")
    dist.set_defaults(func=_cmd_distconst)

    filt = sub.add_parser("filtration", help="prefix dimension filtration")
    filt.add_argument("family")
    filt.set_defaults(func=_cmd_filtration)

    l31 = sub.add_parser("lemma31", help="generic prefix combinations")
    l31.add_argument("family")
    l31.set_defaults(func=_cmd_lemma31)

    l32 = sub.add_parser("lemma32", help="product inequality evaluation")
    l32.add_argument("--t", required=True, help="comma-separated integers, first 1")
    l32.add_argument("--a", required=True, help="comma-separated nonincreasing rationals")
    l32.set_defaults(func=_cmd_lemma32)

    chow = sub.add_parser("chow", help="Chow forms and weights")
    chow_sub = chow.add_subparsers(dest="subcommand", required=True)
    cf = chow_sub.add_parser("form")
    cf.add_argument("ideal")
    cf.add_argument("--dim", type=int, required=True)
    cf.set_defaults(func=_cmd_chow_form)
    cw = chow_sub.add_parser("weight")
    cw.add_argument("form", help="Chow form JSON file")
    cw.add_argument("--c", required=True, help="comma-separated weights")
    cw.set_defaults(func=_cmd_chow_weight)

    t22 = sub.add_parser("thm22", help="Chow-weight lower-bound report")
    t22.add_argument("config")
    t22.set_defaults(func=_cmd_thm22)

    img = sub.add_parser("image", help="image variety under a coordinate map")
    img.add_argument("config")
    img.set_defaults(func=_cmd_image)

    bounds_cmd = sub.add_parser("bounds", help="explicit constants")
    bounds_cmd.add_argument("--n", type=int, required=True)
    bounds_cmd.add_argument("--m", type=int, required=True)
    bounds_cmd.add_argument("--d", type=int, required=True)
    bounds_cmd.add_argument("--Delta", type=int, required=True)
    bounds_cmd.add_argument("--delta-x", dest="delta_x", default="1")
    bounds_cmd.add_argument("--delta", default="1/2")
    bounds_cmd.add_argument("--C", type=int, default=1)
    bounds_cmd.add_argument("--s", type=int, default=1)
    bounds_cmd.add_argument("--H", type=float, default=0.0)
    bounds_cmd.add_argument("--check", action="store_true", help="run proof identities")
    bounds_cmd.set_defaults(func=_cmd_bounds)

    cov = sub.add_parser("covering", help="covering-lemma constructions")
    cov_sub = cov.add_subparsers(dest="subcommand", required=True)
    cm = cov_sub.add_parser("make")
    cm.add_argument("--q", type=int, required=True)
    cm.add_argument("--theta", required=True)
    cm.add_argument("--csv", action="store_true")
    cm.set_defaults(func=_cmd_covering_make)
    cc = cov_sub.add_parser("check")
    cc.add_argument("--q", type=int, required=True)
    cc.add_argument("--theta", required=True)
    cc.add_argument("--A", dest="deficits", required=True, help="comma-separated A_j <= 0")
    cc.add_argument("--lam", required=True)
    cc.set_defaults(func=_cmd_covering_check)

    enum = sub.add_parser("enumerate", help="rational points of bounded height")
    enum.add_argument("--ambient", type=int, required=True, help="N of P^N")
    enum.add_argument("--bound", type=int, required=True)
    enum.add_argument("--variety", help="ideal JSON file")
    enum.add_argument("--count-only", action="store_true")
    enum.set_defaults(func=_cmd_enumerate)

    aud = sub.add_parser("audit", help="approximation-inequality audit")
    aud.add_argument("config")
    aud.add_argument("--out", help="write JSON report to this path")
    aud.add_argument("--csv", help="stream every row to this CSV file")
    aud.set_defaults(func=_cmd_audit)

    pc = sub.add_parser("proofcheck", help="proof-step inequality pipeline")
    pc.add_argument("config")
    pc.set_defaults(func=_cmd_proofcheck)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except InternalCheckError as exc:
        print(f"internal assertion failed: {exc}", file=sys.stderr)
        return 4
    except (PreconditionError, HeightlabError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
