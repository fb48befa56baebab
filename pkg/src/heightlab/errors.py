"""Typed errors shared across the library.

The CLI maps these onto exit codes: precondition/hypothesis failures exit
with 2, budget exhaustion with 3, internal consistency violations with 4.
"""

from __future__ import annotations


class HeightlabError(Exception):
    """Base class for all library errors."""


class PreconditionError(HeightlabError):
    """An operation was called outside its contract (exit code 2)."""


class DomainError(PreconditionError):
    """Input outside the mathematical domain, e.g. the absolute value of 0."""


class PolyParseError(PreconditionError):
    """Polynomial text rejected; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class PointOnDivisorError(PreconditionError):
    """A proximity function was requested at a point lying on the divisor."""


class PointOnSubschemeError(PointOnDivisorError):
    """Every defining equation of the subscheme vanishes at the point."""


class HypothesisError(PreconditionError):
    """A theorem's hypothesis failed; lists every violated condition."""

    def __init__(self, failures: list[str]):
        super().__init__("hypothesis failure: " + "; ".join(failures))
        self.failures = tuple(failures)


class StructuralError(PreconditionError):
    """Computed object violates a structural assumption (e.g. reducible input)."""


class BudgetExceededError(HeightlabError):
    """A configurable resource budget ran out (exit code 3)."""


class InternalCheckError(HeightlabError):
    """An identity the implementation guarantees failed (exit code 4)."""
