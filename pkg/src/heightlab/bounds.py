"""Explicit constants of the quantitative theorem and the covering lemma.

The headline constants split into an exactly rational part and a
transcendental log factor.  A_2 and B_2 are plain rationals.  A_1, A_3, B_1
and B_3 are exp of astronomically large arguments, so they are handled
purely in the log domain: the exp argument is kept as an exact Fraction and
only the residual log factors are floated.  The proof-step identity
B'_2 * Delta = A_2 is checked as an exact rational equality, and
log B'_1 + log T <= log A_1 is checked by comparing the (exactly equal)
rational exp arguments symbolically and the float residuals numerically.

The covering construction uses the simplex grid with mesh
M = ceil(2q(1-theta)/theta): witnesses are found by flooring the normalized
deficits and refilling the slack, which guarantees the covering property.
The grid may be larger than the citation's (e/theta)^(q-1) cardinality
bound; the report states both numbers and flags the excess instead of
asserting it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import InternalCheckError, PreconditionError


@dataclass(frozen=True)
class ProblemParams:
    """Inputs of the constant formulas.

    Over Q the coefficient-field degree C is 1; it is kept as a parameter so
    the formulas read exactly as stated.  `h_value` is the quantity H
    (ambient log term + variety height + max system height), supplied by the
    caller; the proof-check pipeline assembles it from actual data.
    """

    n: int
    m: int
    d: int
    Delta: int
    delta_x: Fraction
    delta: Fraction
    C: int = 1
    s: int = 1
    h_value: float = 0.0

    def __post_init__(self) -> None:
        if not (self.m >= self.n >= 1):
            raise PreconditionError("need m >= n >= 1")
        if not (0 < self.delta < 1):
            raise PreconditionError("need 0 < delta < 1")
        if self.delta_x <= 0:
            raise PreconditionError("need delta_x > 0")
        if min(self.d, self.Delta, self.C, self.s) < 1:
            raise PreconditionError("d, Delta, C, s must be >= 1")
        if self.h_value < 0:
            raise PreconditionError("H must be >= 0")


def alpha(params: ProblemParams) -> Fraction:
    """alpha = (m+1) delta_x / (n + delta_x)."""
    return Fraction(params.m + 1) * params.delta_x / (params.n + params.delta_x)


@dataclass(frozen=True)
class BoundSet:
    """The two families of constants, with exact exp arguments kept aside."""

    alpha: Fraction
    A2: Fraction
    log_A1: float
    log_A3: float
    h_value: float
    exp_arg_A1: Fraction
    a3_rational_factor: Fraction
    B2: Fraction | None = None
    log_B1: float | None = None
    log_B3: float | None = None


def theorem_constants(params: ProblemParams) -> BoundSet:
    """A_1, A_2, A_3 (log domain where needed) and the echoed H."""
    n, m, d, Delta = params.n, params.m, params.d, params.Delta
    delta, C, s = params.delta, params.C, params.s
    a = alpha(params)
    beta = a * (n + 1) + 1
    A2 = (8 * n + 6) * beta**2 * d * Delta ** (n + 1) / delta
    exp_arg_A1 = (
        Fraction(2) ** (12 * n + 4)
        * beta ** (4 * n)
        * delta ** (-2 * n)
        * Fraction(d) ** (2 * n + 2)
        * Fraction(Delta) ** (n * (2 * n + 2))
    )
    log_A1 = (
        float(exp_arg_A1)
        + math.log(4 * (m + 1) * s)
        + ((m + 1) * s - 1) * (math.log(2 * math.e) + math.log(float(beta / delta)))
        + math.log(math.log(4 * C))
        + math.log(math.log(math.log(4 * C)))
    )
    a3_factor = (
        Fraction(2) ** (6 * n + 8)
        * m
        * beta ** (2 * n + 2)
        * delta ** (-n - 1)
        * Fraction(d) ** (n + 2)
        * Fraction(Delta) ** (n * (n + 2))
    )
    log_A3 = float(a3_factor) * math.log(2 * C * s)
    return BoundSet(
        alpha=a,
        A2=A2,
        log_A1=log_A1,
        log_A3=log_A3,
        h_value=params.h_value,
        exp_arg_A1=exp_arg_A1,
        a3_rational_factor=a3_factor,
    )


@dataclass(frozen=True)
class EFConstants:
    """The cited theorem's constants for dimension n, degree D, R+1 coordinates."""

    log_B1: float
    B2: Fraction
    log_B3: float
    exp_arg_B1: Fraction


def ef_constants(n: int, D: int, R: int, delta: Fraction) -> EFConstants:
    """B_1, B_2, B_3 for parameters (n, D, R, delta), logs where needed."""
    if D < 1 or n < 1:
        raise PreconditionError("need n, D >= 1")
    if R < 1:
        raise PreconditionError("need R >= 1 (log log 4R must be defined)")
    delta = Fraction(delta)
    if not (0 < delta <= 1):
        raise PreconditionError("need 0 < delta <= 1")
    B2 = (4 * n + 3) * D / delta
    exp_arg_B1 = Fraction(2) ** (10 * n + 4) * delta ** (-2 * n) * Fraction(D) ** (2 * n + 2)
    log_B1 = float(exp_arg_B1) + math.log(math.log(4 * R) * math.log(math.log(4 * R)))
    log_B3 = float(
        Fraction(2) ** (5 * n + 4) * delta ** (-n - 1) * Fraction(D) ** (n + 2)
    ) * math.log(4 * R)
    return EFConstants(log_B1, B2, log_B3, exp_arg_B1)


@dataclass(frozen=True)
class ProofIdentityReport:
    """Result of the proof-step constant substitutions.

    `T` is read as the integer part of (2e(alpha(n+1)+1)/delta)^((m+1)s-1);
    the bracket in the source display is treated as a floor, which the
    output flags.
    """

    A2: Fraction
    B2_prime_times_Delta: Fraction
    exact_identity_holds: bool
    exp_args_equal: bool
    log_B1_prime: float
    log_T: float
    log_A1: float
    log_inequality_holds: bool
    T_is_floor_reading: bool = True

    def to_json(self) -> dict:
        return {
            "A2": str(self.A2),
            "B2_prime_times_Delta": str(self.B2_prime_times_Delta),
            "exact_identity_holds": self.exact_identity_holds,
            "exp_args_equal": self.exp_args_equal,
            "log_B1_prime": self.log_B1_prime,
            "log_T": self.log_T,
            "log_A1": self.log_A1,
            "log_inequality_holds": self.log_inequality_holds,
            "T_read_as_floor": self.T_is_floor_reading,
        }


def check_proof_identities(params: ProblemParams) -> ProofIdentityReport:
    """Verify B'_2 Delta = A_2 exactly and log B'_1 + log T <= log A_1.

    B'_i substitute delta/(2(alpha(n+1)+1)^2) for delta, C(m+1)s - 1 for R
    and d Delta^n for D.  A failure raises InternalCheckError: the formulas
    are algebraic identities, so a failure means a transcription bug.
    """
    n, m, d, Delta = params.n, params.m, params.d, params.Delta
    delta, C, s = params.delta, params.C, params.s
    bounds = theorem_constants(params)
    beta = bounds.alpha * (n + 1) + 1
    delta_prime = delta / (2 * beta**2)
    R_prime = C * (m + 1) * s - 1
    D_prime = d * Delta**n

    B2_prime = (4 * n + 3) * D_prime / delta_prime
    lhs_exact = B2_prime * Delta
    exact_ok = lhs_exact == bounds.A2

    exp_arg_B1_prime = (
        Fraction(2) ** (10 * n + 4)
        * delta_prime ** (-2 * n)
        * Fraction(D_prime) ** (2 * n + 2)
    )
    exp_args_equal = exp_arg_B1_prime == bounds.exp_arg_A1

    log_factor_B1 = math.log(math.log(4 * R_prime) * math.log(math.log(4 * R_prime)))
    log_B1_prime = float(exp_arg_B1_prime) + log_factor_B1
    T = math.floor((2 * math.e * float(beta / delta)) ** ((m + 1) * s - 1))
    log_T = math.log(T)

    # Residual comparison: the exact exp arguments cancel, so the inequality
    # reduces to the small log factors.
    residual_lhs = log_factor_B1 + log_T
    residual_rhs = (
        math.log(4 * (m + 1) * s)
        + ((m + 1) * s - 1) * (math.log(2 * math.e) + math.log(float(beta / delta)))
        + math.log(math.log(4 * C))
        + math.log(math.log(math.log(4 * C)))
    )
    log_ok = exp_args_equal and residual_lhs <= residual_rhs
    report = ProofIdentityReport(
        A2=bounds.A2,
        B2_prime_times_Delta=lhs_exact,
        exact_identity_holds=exact_ok,
        exp_args_equal=exp_args_equal,
        log_B1_prime=log_B1_prime,
        log_T=log_T,
        log_A1=bounds.log_A1,
        log_inequality_holds=log_ok,
    )
    if not (exact_ok and log_ok):
        raise InternalCheckError(f"proof identity failed: {report.to_json()}")
    return report


@dataclass(frozen=True)
class CoveringSet:
    """Simplex grid of weight tuples realizing the covering lemma."""

    q: int
    theta: Fraction
    mesh: int
    tuples: tuple[tuple[Fraction, ...], ...]

    @property
    def cardinality(self) -> int:
        return len(self.tuples)

    def stated_cardinality_bound(self) -> float:
        return (math.e / float(self.theta)) ** (self.q - 1)

    def exceeds_stated_bound(self) -> bool:
        return self.cardinality > self.stated_cardinality_bound()

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "theta": str(self.theta),
            "mesh": self.mesh,
            "cardinality": self.cardinality,
            "stated_bound": self.stated_cardinality_bound(),
            "exceeds_stated_bound": self.exceeds_stated_bound(),
            "tuples": [[str(c) for c in row] for row in self.tuples],
        }


def covering_set(q: int, theta: Fraction) -> CoveringSet:
    """All tuples (k_1/M,...,k_q/M) with sum k_j = M, M = ceil(2q(1-theta)/theta)."""
    if q < 2:
        raise PreconditionError("need q >= 2")
    theta = Fraction(theta)
    if not (0 < theta <= Fraction(1, 2)):
        raise PreconditionError("need 0 < theta <= 1/2")
    ratio = 2 * q * (1 - theta) / theta
    mesh = -(-ratio.numerator // ratio.denominator)
    rows: list[tuple[Fraction, ...]] = []
    # compositions of `mesh` into q parts, via bars-and-stars in ascending order
    for bars in combinations(range(mesh + q - 1), q - 1):
        parts = []
        previous = -1
        for b in bars:
            parts.append(b - previous - 1)
            previous = b
        parts.append(mesh + q - 2 - previous)
        rows.append(tuple(Fraction(k, mesh) for k in parts))
    return CoveringSet(q, theta, mesh, tuple(rows))


def covering_check(W: CoveringSet, A, Lam) -> tuple[Fraction, ...]:
    """Find a tuple c in W with A_j <= -c_j (1-theta) Lambda for all j.

    Inputs may be rationals or floats; arithmetic is exact over Fraction
    conversions of the inputs.  The witness is built directly (floor the
    normalized deficits, refill the slack greedily); by construction it lies
    on the grid, and a verification pass re-checks every inequality.
    """
    A = [Fraction(x) for x in A]
    Lam = Fraction(Lam)
    if Lam <= 0:
        raise PreconditionError("Lambda must be positive")
    if len(A) != W.q:
        raise PreconditionError(f"need {W.q} deficit values")
    if any(x > 0 for x in A):
        raise PreconditionError("all A_j must be <= 0")
    total = -sum(A)
    if total < Lam:
        raise PreconditionError("sum A_j <= -Lambda violated")
    M = W.mesh
    theta = W.theta
    b = [-x / total for x in A]
    caps = [min((M * bj) / (1 - theta), Fraction(M)) for bj in b]
    caps_floor = [c.numerator // c.denominator for c in caps]
    k = [(M * bj).numerator // (M * bj).denominator for bj in b]
    k = [min(kj, cap) for kj, cap in zip(k, caps_floor)]
    deficit = M - sum(k)
    while deficit > 0:
        slack = [cap - kj for kj, cap in zip(k, caps_floor)]
        j = max(range(W.q), key=lambda i: (slack[i], -i))
        if slack[j] <= 0:
            raise InternalCheckError("covering construction ran out of slack")
        k[j] += 1
        deficit -= 1
    witness = tuple(Fraction(kj, M) for kj in k)
    for aj, cj in zip(A, witness):
        if not aj <= -cj * (1 - theta) * Lam:
            return _covering_scan(W, A, Lam)
    return witness


def _covering_scan(W: CoveringSet, A, Lam) -> tuple[Fraction, ...]:
    """Exhaustive fallback; reaching its failure branch is a construction bug."""
    one_minus_theta = 1 - W.theta
    for row in W.tuples:
        if all(aj <= -cj * one_minus_theta * Lam for aj, cj in zip(A, row)):
            return row
    raise InternalCheckError("no covering witness exists; construction bug")
