"""Places, normalized absolute values, the product formula, ExactLog."""

import random
from fractions import Fraction

import pytest

from heightlab.errors import DomainError, PreconditionError
from heightlab.qarith import (
    ExactLog,
    INFINITY,
    Place,
    PlaceSet,
    factorize,
    is_prime,
    normalized_abs,
    padic_valuation,
    parse_place,
    parse_rational,
    product_over_places,
    support,
)


def test_normalized_abs_examples():
    assert normalized_abs(12, Place.finite(2)) == Fraction(1, 4)
    assert normalized_abs(Fraction(-3, 8), INFINITY) == Fraction(3, 8)
    assert normalized_abs(5, Place.finite(3)) == 1


def test_normalized_abs_zero_rejected():
    with pytest.raises(DomainError):
        normalized_abs(0, INFINITY)
    with pytest.raises(DomainError):
        normalized_abs(Fraction(0), Place.finite(7))


def test_support_examples():
    assert [str(v) for v in support(12)] == ["inf", "2", "3"]
    assert [str(v) for v in support(1)] == ["inf"]
    assert [str(v) for v in support(Fraction(-3, 8))] == ["inf", "2", "3"]


def test_product_formula_examples():
    # -3/8: (3/8) * 8 * (1/3) = 1
    assert product_over_places(Fraction(-3, 8)) == 1
    assert product_over_places(1) == 1
    # 360/7 over {inf, 2, 3, 5, 7}: (360/7) * (1/8) * (1/9) * (1/5) * 7
    x = Fraction(360, 7)
    expected = Fraction(360, 7) * Fraction(1, 8) * Fraction(1, 9) * Fraction(1, 5) * 7
    assert expected == 1
    assert product_over_places(x) == 1


def test_product_formula_random():
    rng = random.Random(20240811)
    for _ in range(300):
        num = rng.randint(1, 10**6) * rng.choice([-1, 1])
        den = rng.randint(1, 10**6)
        assert product_over_places(Fraction(num, den)) == 1


def test_multiplicativity():
    rng = random.Random(7)
    places = [INFINITY, Place.finite(2), Place.finite(3), Place.finite(5)]
    for _ in range(100):
        x = Fraction(rng.randint(1, 999) * rng.choice([-1, 1]), rng.randint(1, 999))
        y = Fraction(rng.randint(1, 999) * rng.choice([-1, 1]), rng.randint(1, 999))
        for v in places:
            assert normalized_abs(x * y, v) == normalized_abs(x, v) * normalized_abs(y, v)


def test_ultrametric_at_finite_places():
    rng = random.Random(8)
    for _ in range(200):
        p = rng.choice([2, 3, 5, 7])
        x = Fraction(rng.randint(-50, 50), rng.randint(1, 50))
        y = Fraction(rng.randint(-50, 50), rng.randint(1, 50))
        if x == 0 or y == 0 or x + y == 0:
            continue
        v = Place.finite(p)
        assert normalized_abs(x + y, v) <= max(normalized_abs(x, v), normalized_abs(y, v))


def test_place_validation_and_parse():
    with pytest.raises(PreconditionError):
        Place.finite(4)
    with pytest.raises(PreconditionError):
        Place.finite(1)
    assert parse_place("inf") == INFINITY
    assert parse_place("17") == Place.finite(17)
    with pytest.raises(PreconditionError):
        parse_place("x")


def test_place_set_ordering():
    ps = PlaceSet.of([Place.finite(5), INFINITY, Place.finite(2), Place.finite(5)])
    assert [str(v) for v in ps] == ["inf", "2", "5"]
    assert INFINITY in ps
    assert len(ps) == 3


def test_is_prime():
    primes = [2, 3, 5, 7, 11, 104729, 2**31 - 1]
    composites = [0, 1, 4, 9, 104730, 2**31, (2**31 - 1) * 3]
    assert all(is_prime(p) for p in primes)
    assert not any(is_prime(c) for c in composites)
    # beyond the trial-division limit
    assert is_prime(2305843009213693951)  # 2^61 - 1
    assert not is_prime(2305843009213693953)


def test_factorize_and_valuation():
    assert factorize(360) == {2: 3, 3: 2, 5: 1}
    assert padic_valuation(48, 2) == 4
    assert padic_valuation(5, 2) == 0
    with pytest.raises(DomainError):
        padic_valuation(0, 2)


def test_parse_rational():
    assert parse_rational("-3/8") == Fraction(-3, 8)
    assert parse_rational("7") == 7
    with pytest.raises(PreconditionError):
        parse_rational("a/b")


def test_exact_log():
    a = ExactLog(Fraction(2))
    b = ExactLog(Fraction(3))
    assert (a + b).mult == 6
    assert (b - a).mult == Fraction(3, 2)
    assert a.scaled(3).mult == 8
    assert a < b
    assert ExactLog.zero().log == 0.0
    with pytest.raises(PreconditionError):
        ExactLog(Fraction(0))
