"""Explicit constants, proof-step identities, covering lemma."""

import math
import random
from fractions import Fraction
from itertools import product

import pytest

from heightlab.bounds import (
    CoveringSet,
    ProblemParams,
    alpha,
    check_proof_identities,
    covering_check,
    covering_set,
    ef_constants,
    theorem_constants,
)
from heightlab.errors import PreconditionError


def params(**kw):
    base = dict(n=1, m=1, d=1, Delta=1, delta_x=Fraction(1), delta=Fraction(1, 2))
    base.update(kw)
    return ProblemParams(**base)


def test_alpha_examples():
    assert alpha(params(n=1, m=1, delta_x=Fraction(1))) == 1
    assert alpha(params(n=2, m=4, delta_x=Fraction(3))) == 3
    assert alpha(params(n=1, m=2, delta_x=Fraction(1))) == Fraction(3, 2)


def test_alpha_theorem_a_reduction():
    for n in (1, 2, 3):
        p = params(n=n, m=n, delta_x=Fraction(1))
        assert alpha(p) * (n + 1) == n + 1


def test_a2_example():
    assert theorem_constants(params()).A2 == 252


def test_a2_linear_in_d():
    base = theorem_constants(params(d=1)).A2
    assert theorem_constants(params(d=2)).A2 == 2 * base


def test_log_a3_example():
    got = theorem_constants(params()).log_A3
    assert math.isclose(got, 2**14 * 3**4 * 4 * math.log(2), rel_tol=1e-12)


def test_b_constants_examples():
    ef = ef_constants(1, 1, 1, Fraction(1, 2))
    assert ef.B2 == 14
    ef_unit = ef_constants(1, 1, 1, Fraction(1))
    assert math.isclose(ef_unit.log_B3, 2**9 * math.log(4), rel_tol=1e-12)


def test_b2_linear_in_degree():
    one = ef_constants(2, 1, 3, Fraction(1, 2)).B2
    five = ef_constants(2, 5, 3, Fraction(1, 2)).B2
    assert five == 5 * one


def test_ef_requires_positive_r():
    with pytest.raises(PreconditionError):
        ef_constants(1, 1, 0, Fraction(1, 2))


def test_params_validation():
    with pytest.raises(PreconditionError):
        params(n=2, m=1)
    with pytest.raises(PreconditionError):
        params(delta=Fraction(1))
    with pytest.raises(PreconditionError):
        params(delta=Fraction(3, 2))


def test_proof_identities_theorem_a_case():
    report = check_proof_identities(params())
    assert report.exact_identity_holds
    assert report.exp_args_equal
    assert report.log_inequality_holds


def test_proof_identities_on_grid():
    grid = list(
        product(
            [1, 2],            # n
            [0, 1, 2],         # m - n
            [1, 2, 3],         # d
            [1, 2],            # Delta
            [Fraction(1), Fraction(3, 2)],        # delta_x
            [Fraction(1, 2), Fraction(1, 5)],     # delta
        )
    )
    checked = 0
    for n, m_off, d, Delta, delta_x, delta in grid:
        p = params(n=n, m=n + m_off, d=d, Delta=Delta, delta_x=delta_x, delta=delta)
        report = check_proof_identities(p)
        assert report.exact_identity_holds and report.log_inequality_holds
        checked += 1
    assert checked >= 100


def test_constants_monotonicity_spot_checks():
    base_kw = dict(n=1, m=2, d=2, Delta=2, s=1)
    b0 = theorem_constants(params(**base_kw))
    for kw in (dict(d=3), dict(Delta=3), dict(m=3), dict(s=2)):
        bumped = dict(base_kw)
        bumped.update(kw)
        b1 = theorem_constants(params(**bumped))
        assert b1.A2 >= b0.A2
        assert b1.log_A1 >= b0.log_A1
        assert b1.log_A3 >= b0.log_A3
    smaller = dict(base_kw)
    smaller["delta"] = Fraction(1, 4)
    smaller_delta = theorem_constants(params(**smaller))
    assert smaller_delta.A2 >= b0.A2
    assert smaller_delta.log_A1 >= b0.log_A1


def test_covering_set_construction():
    W = covering_set(2, Fraction(1, 2))
    assert W.mesh == 4
    assert W.cardinality == 5
    assert (Fraction(0), Fraction(1)) in W.tuples
    assert (Fraction(1), Fraction(0)) in W.tuples
    for row in W.tuples:
        assert sum(row) == 1
        assert all(c >= 0 for c in row)


def test_covering_cardinality_is_binomial():
    for q, theta in [(2, Fraction(1, 2)), (3, Fraction(1, 2)), (3, Fraction(1, 4)), (4, Fraction(1, 2))]:
        W = covering_set(q, theta)
        assert W.cardinality == math.comb(W.mesh + q - 1, q - 1)


def test_covering_check_examples():
    W = covering_set(2, Fraction(1, 2))
    assert covering_check(W, [0, -2], 2) == (0, 1)
    uniform = covering_check(W, [-1, -1], 2)
    assert uniform == (Fraction(1, 2), Fraction(1, 2))
    # certificate arithmetic from the construction: -1 <= -(1/2)(1/2)(2)
    assert Fraction(-1) <= -Fraction(1, 2) * Fraction(1, 2) * 2


def test_covering_check_validation():
    W = covering_set(2, Fraction(1, 2))
    with pytest.raises(PreconditionError):
        covering_check(W, [0, 1], 1)
    with pytest.raises(PreconditionError):
        covering_check(W, [0, -1], 2)
    with pytest.raises(PreconditionError):
        covering_check(W, [0, -1], 0)


def test_covering_check_randomized():
    rng = random.Random(1234)
    for q, theta in product((2, 3, 4), (Fraction(1, 2), Fraction(1, 4))):
        W = covering_set(q, theta)
        one_minus_theta = 1 - theta
        for _ in range(300):
            A = [-Fraction(rng.randint(0, 60), rng.randint(1, 12)) for _ in range(q)]
            total = -sum(A)
            if total == 0:
                continue
            lam = total * Fraction(rng.randint(1, 100), 100)
            witness = covering_check(W, A, lam)
            assert sum(witness) == 1
            assert witness in W.tuples
            for aj, cj in zip(A, witness):
                assert aj <= -cj * one_minus_theta * lam
