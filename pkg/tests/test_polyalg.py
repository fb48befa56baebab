"""Parsing, evaluation, homogeneity, the coefficient norms and heights."""

import random
from fractions import Fraction

import pytest

from heightlab.errors import PolyParseError, PreconditionError
from heightlab.polyalg import (
    MultiPoly,
    PolySystem,
    homogeneous_degree,
    parse_poly,
    system_height,
    system_norm,
)
from heightlab.qarith import INFINITY, Place


def test_parse_examples():
    f = parse_poly("2*x0^2 + 3*x1^2", 2)
    assert f.terms == {(2, 0): Fraction(2), (0, 2): Fraction(3)}
    g = parse_poly("1/2*x0*x1", 2)
    assert g.terms == {(1, 1): Fraction(1, 2)}
    with pytest.raises(PolyParseError):
        parse_poly("x0 - x0", 1)


def test_parse_errors_carry_positions():
    with pytest.raises(PolyParseError) as err:
        parse_poly("x0 + x5", 2)
    assert "x5" in str(err.value)
    with pytest.raises(PolyParseError):
        parse_poly("x0 + ", 2)
    with pytest.raises(PolyParseError):
        parse_poly("2 x0", 2)  # no implicit multiplication
    with pytest.raises(PolyParseError):
        parse_poly("x0 ^ 1/2", 2)


def test_parse_parentheses_and_unary_minus():
    f = parse_poly("-(x0 - x1)^2", 2)
    g = parse_poly("-x0^2 + 2*x0*x1 - x1^2", 2)
    assert f == g


def test_print_parse_roundtrip_random():
    rng = random.Random(11)
    for _ in range(60):
        nv = rng.randint(1, 4)
        terms = {}
        for _ in range(rng.randint(1, 6)):
            mono = tuple(rng.randint(0, 3) for _ in range(nv))
            coef = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
            if coef:
                terms[mono] = coef
        if not terms:
            continue
        f = MultiPoly(nv, terms)
        assert parse_poly(f.to_text(), nv) == f


def test_evaluate_examples():
    conic = parse_poly("x0*x2 - x1^2", 3)
    assert parse_poly("x0^2 + x1^2", 2).evaluate([3, 4]) == 25
    assert conic.evaluate([1, 2, 4]) == 0
    f = parse_poly("2*x0^2 + 3*x1^2", 2)
    assert f.evaluate([Fraction(1, 2), Fraction(1, 3)]) == Fraction(5, 6)
    with pytest.raises(PreconditionError):
        f.evaluate([1, 2, 3])


def test_homogeneous_degree():
    assert homogeneous_degree(parse_poly("x0*x2 - x1^2", 3)) == 2
    assert homogeneous_degree(parse_poly("x0 + x1^2", 2)) is None
    assert homogeneous_degree(parse_poly("x0^3", 1)) == 3


def test_homogeneous_scaling_of_evaluation():
    rng = random.Random(5)
    f = parse_poly("x0^2*x1 + 2*x1^3 - x0*x1*x2", 3)
    for _ in range(40):
        point = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)]
        lam = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        scaled = [lam * x for x in point]
        assert f.evaluate(scaled) == lam**3 * f.evaluate(point)


def test_system_norm_examples():
    f = parse_poly("2*x0^2 + 3*x1^2", 2)
    one = MultiPoly.constant(2, 1)
    assert system_norm([f], Place.finite(2), "max") == 1
    assert system_norm([one, f], INFINITY, "sum") == 6
    assert system_norm([parse_poly("x0 - x1", 2)], INFINITY, "max") == 1
    # sum variant collapses to max at finite places
    assert system_norm([one, f], Place.finite(3), "sum") == system_norm(
        [one, f], Place.finite(3), "max"
    )


def test_system_height_examples():
    f = parse_poly("2*x0^2 + 3*x1^2", 2)
    one = MultiPoly.constant(2, 1)
    assert system_height([f], "h").mult == 3
    assert system_height([parse_poly("x0 + x1", 2)], "h").mult == 1
    assert system_height([one, f], "h1").mult == 6


def test_height_scale_invariance():
    rng = random.Random(13)
    for _ in range(50):
        f = MultiPoly(
            2,
            {
                (2, 0): Fraction(rng.randint(1, 30), rng.randint(1, 9)),
                (1, 1): Fraction(rng.randint(-30, -1), rng.randint(1, 9)),
                (0, 2): Fraction(rng.randint(1, 30)),
            },
        )
        lam = Fraction(rng.randint(1, 40) * rng.choice([-1, 1]), rng.randint(1, 40))
        assert system_height([f.scaled(lam)], "h").mult == system_height([f], "h").mult


def test_h1_dominates_h():
    rng = random.Random(17)
    for _ in range(50):
        polys = []
        for _ in range(rng.randint(1, 3)):
            terms = {
                (rng.randint(0, 2), rng.randint(0, 2)): Fraction(
                    rng.randint(1, 50) * rng.choice([-1, 1]), rng.randint(1, 20)
                )
                for _ in range(rng.randint(1, 4))
            }
            polys.append(MultiPoly(2, terms))
        assert system_height(polys, "h1").mult >= system_height(polys, "h").mult


def test_poly_system_validation():
    with pytest.raises(PreconditionError):
        PolySystem.of([parse_poly("x0 + x1^2", 2)])
    system = PolySystem.of([parse_poly("x0", 2), parse_poly("x1^2", 2)])
    assert system.degrees == (1, 2)


def test_constant_polynomial_is_representable():
    one = MultiPoly.constant(3, 1)
    assert not one.is_zero
    assert one.evaluate([5, 7, 9]) == 1
    assert system_height([one], "h").mult == 1
