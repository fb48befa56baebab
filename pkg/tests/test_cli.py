"""Point enumeration, the audit harness and the command-line surface."""

import json
import math
from fractions import Fraction
from pathlib import Path

import pytest

from heightlab.cli import AuditConfig, audit, enumerate_points
from heightlab.cli.main import main
from heightlab.errors import PreconditionError
from heightlab.groebner import Ideal
from heightlab.heights import ProjPoint, approx_product
from heightlab.polyalg import PolySystem, parse_poly
from heightlab.qarith import INFINITY, Place, PlaceSet

S_INF = PlaceSet.of([INFINITY])
STANDARD_SYSTEM = PolySystem.of(
    [parse_poly("x0", 2), parse_poly("x1", 2), parse_poly("x0 - x1", 2)]
)


def brute_force_count(ambient_dim, bound):
    """Independent oracle: canonicalize every small tuple and count classes."""
    from itertools import product as iproduct

    seen = set()
    for tup in iproduct(range(-bound, bound + 1), repeat=ambient_dim + 1):
        if not any(tup):
            continue
        g = 0
        for c in tup:
            g = math.gcd(g, c)
        canon = tuple(c // g for c in tup)
        first = next(c for c in canon if c)
        if first < 0:
            canon = tuple(-c for c in canon)
        seen.add(canon)
    return len(seen)


def test_enumerate_bound_one():
    points = [p.to_text() for p in enumerate_points(1, 1)]
    assert sorted(points) == ["0:1", "1:-1", "1:0", "1:1"]
    assert len(points) == 4


def test_enumerate_bound_two():
    points = list(enumerate_points(1, 2))
    assert len(points) == 8
    texts = {p.to_text() for p in points}
    assert {"2:1", "1:2", "2:-1", "1:-2"} <= texts


def test_enumerate_matches_brute_force():
    for bound in (1, 2, 5, 17, 50):
        assert len(list(enumerate_points(1, bound))) == brute_force_count(1, bound)
    assert len(list(enumerate_points(2, 4))) == brute_force_count(2, 4)


def test_enumerate_no_duplicates_and_canonical():
    points = list(enumerate_points(2, 3))
    texts = [p.to_text() for p in points]
    assert len(texts) == len(set(texts))
    for p in points:
        g = 0
        for c in p.coords:
            g = math.gcd(g, c)
        assert g == 1
        assert next(c for c in p.coords if c) > 0


def test_enumerate_filters_to_variety():
    conic = Ideal.of(3, [parse_poly("x0*x2 - x1^2", 3)])
    for p in enumerate_points(2, 6, conic):
        x0, x1, x2 = p.coords
        assert x0 * x2 == x1 * x1


def test_enumerate_validation():
    with pytest.raises(PreconditionError):
        list(enumerate_points(1, 0))


def make_config(**kw):
    base = dict(
        system=STANDARD_SYSTEM,
        variety=None,
        places=S_INF,
        exponent=Fraction(2),
        delta=Fraction(1, 2),
        height_bound=30,
    )
    base.update(kw)
    return AuditConfig(**base)


def test_audit_reproduces_classic_ratio():
    report = audit(make_config())
    by_point = {r.point.to_text(): r for r in report.rows}
    assert by_point["2:1"].ratio == -2.0
    assert math.isclose(by_point["2:1"].lhs, -2 * math.log(2), rel_tol=1e-12)
    assert by_point["2:1"].flagged is False  # -2 > -2.5
    assert report.summary["min_ratio"] == -2.0


def test_audit_on_divisor_points_are_separated():
    report = audit(make_config(height_bound=3))
    assert "1:1" in report.on_divisor  # lies on x0 - x1
    assert "1:0" in report.on_divisor
    assert "0:1" in report.on_divisor
    assert all(r.point.to_text() not in report.on_divisor for r in report.rows)


def test_audit_flags_iff_exact_predicate():
    # threshold 1.9 < 2 so the classic points must be flagged
    report = audit(make_config(exponent=Fraction(3, 2), delta=Fraction(2, 5)))
    flagged = {r.point.to_text() for r in report.rows if r.flagged}
    assert "2:1" in flagged and "1:2" in flagged
    # independent recheck via the exact multiplicative predicate
    threshold = Fraction(3, 2) + Fraction(2, 5)
    for row in report.rows:
        point = row.point
        h_mult = max(abs(c) for c in point.coords)
        if h_mult == 1:
            assert not row.flagged
            continue
        V, L = approx_product(STANDARD_SYSTEM, S_INF, point)
        p, q = threshold.numerator, threshold.denominator
        expected = V**q * Fraction(h_mult) ** (p * L) <= 1
        assert row.flagged == expected


def test_audit_deterministic_reports():
    r1 = audit(make_config(height_bound=40)).to_json_text()
    r2 = audit(make_config(height_bound=40)).to_json_text()
    assert r1 == r2


def test_audit_finite_place():
    system = PolySystem.of([parse_poly("x0", 2), parse_poly("x1", 2)])
    cfg = AuditConfig(
        system=system,
        variety=None,
        places=PlaceSet.of([INFINITY, Place.finite(2)]),
        exponent=Fraction(2),
        delta=Fraction(1, 2),
        height_bound=20,
    )
    report = audit(cfg)
    by_point = {r.point.to_text(): r for r in report.rows}
    # at (4:1): infinity gives log(4*1/16); at p=2, ||4||_2 = 1/4
    expected = math.log(4) + math.log(1) - 2 * math.log(4) + math.log(0.25)
    assert math.isclose(by_point["4:1"].lhs, expected, rel_tol=1e-12)


def test_audit_rejects_bad_configs():
    with pytest.raises(PreconditionError):
        make_config(places=PlaceSet.of([]))
    with pytest.raises(PreconditionError):
        # x0 and x1 share the zero (0:0:1) on P^2
        AuditConfig(
            system=PolySystem.of([parse_poly("x0", 3), parse_poly("x1", 3)]),
            variety=None,
            places=S_INF,
            exponent=Fraction(2),
            delta=Fraction(1, 2),
            height_bound=5,
        )


def test_audit_config_json():
    cfg = AuditConfig.from_json(
        {
            "vars": 2,
            "system": ["x0", "x1", "x0 - x1"],
            "X": None,
            "S": ["inf"],
            "exponent": "2",
            "delta": "1/2",
            "bound": 10,
        }
    )
    assert cfg.height_bound == 10
    assert cfg.exponent == 2


def run_cli(args, capsys):
    code = main(args)
    out = capsys.readouterr().out
    return code, out


def test_cli_height_point(capsys):
    code, out = run_cli(["height", "point", "2,4,6"], capsys)
    assert code == 0
    assert "multiplicative height 3" in out


def test_cli_bounds_json(capsys):
    code, out = run_cli(
        ["--json", "bounds", "--n", "1", "--m", "1", "--d", "1", "--Delta", "1",
         "--delta", "1/2", "--check"],
        capsys,
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["A2"] == "252"
    assert payload["identities"]["exact_identity_holds"] is True


def test_cli_lemma32_and_covering(capsys):
    code, out = run_cli(["lemma32", "--t", "1,2,4", "--a", "3,2"], capsys)
    assert code == 0 and "delta 3/2" in out
    code, out = run_cli(
        ["covering", "check", "--q", "2", "--theta", "1/2", "--A", "0,-2", "--lam", "2"],
        capsys,
    )
    assert code == 0 and "('0', '1')" in out


def test_cli_exit_codes(tmp_path, capsys):
    # precondition failure: lemma32 with a bad t ladder
    code, _ = run_cli(["lemma32", "--t", "2,3", "--a", "2"], capsys)
    assert code == 2
    # budget exceeded
    ideal_file = tmp_path / "tc.json"
    ideal_file.write_text(
        json.dumps(
            {
                "vars": 4,
                "gens": ["x0*x2 - x1^2", "x1*x3 - x2^2", "x0*x3 - x1*x2"],
            }
        )
    )
    code, _ = run_cli(["--budget", "1,1", "dimension", str(ideal_file)], capsys)
    assert code == 3


def test_cli_dimension_degree_distconst(tmp_path, capsys):
    conic_file = tmp_path / "conic.json"
    conic_file.write_text(json.dumps({"vars": 3, "gens": ["x0*x2 - x1^2"]}))
    code, out = run_cli(["dimension", str(conic_file)], capsys)
    assert code == 0 and "1" in out
    code, out = run_cli(["degree", str(conic_file)], capsys)
    assert code == 0 and "2" in out

    family_file = tmp_path / "family.json"
    family_file.write_text(
        json.dumps(
            {
                "X": {"vars": 3, "gens": []},
                "mode": "divisor",
                "members": [["x0"], ["x1"], ["x0 + x1"]],
            }
        )
    )
    code, out = run_cli(["--json", "distconst", str(family_file)], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["value"] == "3/2"
    assert payload["witness"] == [0, 1, 2]


def test_cli_audit_csv_and_out(tmp_path, capsys):
    cfg_file = tmp_path / "audit.json"
    cfg_file.write_text(
        json.dumps(
            {
                "vars": 2,
                "system": ["x0", "x1", "x0 - x1"],
                "X": None,
                "S": ["inf"],
                "exponent": "2",
                "delta": "1/2",
                "bound": 12,
            }
        )
    )
    out_file = tmp_path / "report.json"
    csv_file = tmp_path / "rows.csv"
    code, _ = run_cli(
        ["audit", str(cfg_file), "--out", str(out_file), "--csv", str(csv_file)],
        capsys,
    )
    assert code == 0
    report = json.loads(out_file.read_text())
    assert report["summary"]["min_ratio"] == -2.0
    lines = csv_file.read_text().splitlines()
    assert lines[0] == "point,h_mult,lhs,ratio,flagged"
    assert len(lines) - 1 == report["summary"]["evaluated"]


def test_cli_proofcheck(tmp_path, capsys):
    cfg_file = tmp_path / "proof.json"
    cfg_file.write_text(
        json.dumps(
            {
                "vars": 2,
                "X": {"vars": 2, "gens": []},
                "system": ["x0", "x1^2"],
                "S": ["inf"],
                "params": {
                    "n": 1, "m": 1, "d": 1, "Delta": 2,
                    "delta_x": "1", "delta": "1/2",
                },
                "samples": 10,
            }
        )
    )
    code, out = run_cli(["proofcheck", str(cfg_file)], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["dim_Y"] == 1
    assert payload["degree_Y"] == 1
    assert payload["ineq_system_height"]["holds"] is True
    assert payload["min_aggregate"] == "1/2"


def test_cli_enumerate_and_chow(tmp_path, capsys):
    code, out = run_cli(["enumerate", "--ambient", "1", "--bound", "2", "--count-only"], capsys)
    assert code == 0 and out.strip() == "8"
    p1_file = tmp_path / "p1.json"
    p1_file.write_text(json.dumps({"vars": 2, "gens": []}))
    code, out = run_cli(["--json", "chow", "form", str(p1_file), "--dim", "1"], capsys)
    assert code == 0
    payload = json.loads(out)
    assert payload["per_block_degree"] == 1
