"""Exact arithmetic over Q: primes, places, normalized absolute values.

Rationals are `fractions.Fraction` throughout (lowest terms, positive
denominator, zero is 0/1 -- the stdlib type already enforces the invariants
we need).  A place of Q is either the archimedean place or a finite prime p;
the normalized absolute value satisfies ||x||_inf = |x| and ||x||_p =
p^(-v_p(x)), so the product over all places of any nonzero rational is
exactly 1.  Downstream height identities lean on that product formula as an
exact equality, never a float comparison.

Logarithmic quantities (heights, Weil values, norms) are carried as
`ExactLog`: the positive rational exp of the quantity.  Adding logs turns
into multiplying rationals, so identities stay exactly testable; the float
log is taken only for display.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import DomainError, PreconditionError

Rational = Fraction

_TRIAL_LIMIT = 1 << 20
# Deterministic Miller-Rabin bases, valid for every n < 3.3 * 10^24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test (trial division, then strong tests)."""
    if n < 2:
        return False
    for p in (2, 3, 5):
        if n % p == 0:
            return n == p
    limit = min(isqrt(n), _TRIAL_LIMIT)
    d = 7
    while d <= limit:
        for off in (0, 4, 6, 10, 12, 16, 22, 24):
            if n % (d + off) == 0:
                return n == d + off
        d += 30
    if isqrt(n) <= _TRIAL_LIMIT:
        return True
    return _strong_probable_prime(n)


def _strong_probable_prime(n: int) -> bool:
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        if a % n == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n| as {prime: exponent}; n must be nonzero."""
    if n == 0:
        raise DomainError("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    d = 7
    while d * d <= n:
        for off in (0, 4, 6, 10, 12, 16, 22, 24):
            q = d + off
            while n % q == 0:
                out[q] = out.get(q, 0) + 1
                n //= q
        d += 30
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def padic_valuation(n: int, p: int) -> int:
    """v_p(n) for a nonzero integer n."""
    if n == 0:
        raise DomainError("v_p(0) is infinite")
    v = 0
    n = abs(n)
    while n % p == 0:
        v += 1
        n //= p
    return v


@dataclass(frozen=True)
class Place:
    """A place of Q: the archimedean place (prime=None) or a finite prime."""

    prime: int | None = None

    def __post_init__(self) -> None:
        if self.prime is not None and not is_prime(self.prime):
            raise PreconditionError(f"{self.prime} is not prime")

    @classmethod
    def infinity(cls) -> "Place":
        return cls(None)

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls(p)

    @property
    def is_infinite(self) -> bool:
        return self.prime is None

    def sort_key(self) -> tuple[int, int]:
        return (0, 0) if self.prime is None else (1, self.prime)

    def __str__(self) -> str:
        return "inf" if self.prime is None else str(self.prime)

    def __repr__(self) -> str:
        return f"Place({self})"


INFINITY = Place.infinity()


def parse_place(text: str) -> Place:
    """Parse "inf" or a decimal prime."""
    text = text.strip()
    if text in ("inf", "oo", "infinity"):
        return INFINITY
    try:
        p = int(text)
    except ValueError as exc:
        raise PreconditionError(f"not a place: {text!r}") from exc
    return Place.finite(p)


@dataclass(frozen=True)
class PlaceSet:
    """An ordered, duplicate-free set of places (infinity first, primes ascending)."""

    places: tuple[Place, ...]

    def __post_init__(self) -> None:
        if len(set(self.places)) != len(self.places):
            raise PreconditionError("duplicate places")
        if list(self.places) != sorted(self.places, key=Place.sort_key):
            raise PreconditionError("places not sorted")

    @classmethod
    def of(cls, places) -> "PlaceSet":
        return cls(tuple(sorted(set(places), key=Place.sort_key)))

    @classmethod
    def parse(cls, texts) -> "PlaceSet":
        return cls.of(parse_place(t) for t in texts)

    def union(self, other: "PlaceSet") -> "PlaceSet":
        return PlaceSet.of(self.places + other.places)

    def __iter__(self):
        return iter(self.places)

    def __len__(self) -> int:
        return len(self.places)

    def __contains__(self, v: Place) -> bool:
        return v in self.places

    def __str__(self) -> str:
        return "{" + ", ".join(str(v) for v in self.places) + "}"


def normalized_abs(x: Rational | int, v: Place) -> Fraction:
    """The exact value of ||x||_v for nonzero rational x."""
    x = Fraction(x)
    if x == 0:
        raise DomainError("||0||_v is 0; excluded so logs stay finite")
    if v.is_infinite:
        return abs(x)
    p = v.prime
    val = padic_valuation(x.numerator, p) - padic_valuation(x.denominator, p)
    return Fraction(1, p**val) if val >= 0 else Fraction(p**-val)


def support(x: Rational | int) -> PlaceSet:
    """All places v with ||x||_v != 1, plus the archimedean place."""
    x = Fraction(x)
    if x == 0:
        raise DomainError("support of 0 is undefined")
    primes = set(factorize(x.numerator)) | set(factorize(x.denominator))
    return PlaceSet.of([INFINITY] + [Place.finite(p) for p in primes])


def product_over_places(x: Rational | int) -> Fraction:
    """prod_v ||x||_v over the support of x; equals 1 by the product formula."""
    x = Fraction(x)
    if x == 0:
        raise DomainError("product formula needs x != 0")
    result = Fraction(1)
    for v in support(x):
        result *= normalized_abs(x, v)
    return result


def parse_rational(text: str) -> Fraction:
    """Parse "a" or "a/b" with an optional leading minus sign."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise PreconditionError(f"not a rational: {text!r}") from exc


@dataclass(frozen=True)
class ExactLog:
    """A log-domain quantity stored as its exact positive rational exp.

    Addition of logs multiplies the stored value; comparisons compare the
    stored value, so height identities are decided without floats.
    """

    mult: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "mult", Fraction(self.mult))
        if self.mult <= 0:
            raise PreconditionError("ExactLog needs a positive multiplicative value")

    @classmethod
    def zero(cls) -> "ExactLog":
        return cls(Fraction(1))

    def __add__(self, other: "ExactLog") -> "ExactLog":
        return ExactLog(self.mult * other.mult)

    def __sub__(self, other: "ExactLog") -> "ExactLog":
        return ExactLog(self.mult / other.mult)

    def scaled(self, k: int) -> "ExactLog":
        """k times the quantity, for an integer k (exact)."""
        if k >= 0:
            return ExactLog(self.mult**k)
        return ExactLog(1 / self.mult**-k)

    def __lt__(self, other: "ExactLog") -> bool:
        return self.mult < other.mult

    def __le__(self, other: "ExactLog") -> bool:
        return self.mult <= other.mult

    @property
    def log(self) -> float:
        """Float value of the log, for display only."""
        return math.log(self.mult.numerator) - math.log(self.mult.denominator)

    def __repr__(self) -> str:
        return f"ExactLog(log {self.mult})"
