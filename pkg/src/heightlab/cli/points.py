"""Enumeration of projective rational points of bounded height.

Canonical representatives (coprime integers, first nonzero coordinate
positive) are generated directly, so each point appears exactly once, in a
fixed deterministic order: leading zeros first, then the leading coordinate
ascending with the free coordinates in lexicographic order.
"""

from __future__ import annotations

import math
from itertools import product
from typing import Iterator

from ..errors import PreconditionError
from ..groebner import Ideal
from ..heights import ProjPoint


def _lead_positive_tuples(k: int, bound: int) -> Iterator[tuple[int, ...]]:
    """Length-k integer tuples with entries in [-bound, bound] whose first
    nonzero entry is positive (the all-zero tuple is also emitted)."""
    if k == 0:
        yield ()
        return
    for rest in _lead_positive_tuples(k - 1, bound):
        yield (0,) + rest
    full = range(-bound, bound + 1)
    for lead in range(1, bound + 1):
        for rest in product(full, repeat=k - 1):
            yield (lead,) + rest


def enumerate_points(
    ambient_dim: int, bound: int, variety: Ideal | None = None
) -> Iterator[ProjPoint]:
    """All points of P^N(Q) with multiplicative height <= bound, each once.

    When a variety is given, only points where every generator vanishes are
    emitted.  The order is deterministic.
    """
    if bound < 1:
        raise PreconditionError("height bound must be >= 1")
    if ambient_dim < 1:
        raise PreconditionError("ambient dimension must be >= 1")
    if variety is not None and variety.num_vars != ambient_dim + 1:
        raise PreconditionError("variety lives in a different ambient space")
    gens = variety.gens if variety is not None else ()
    gcd = math.gcd
    for coords in _lead_positive_tuples(ambient_dim + 1, bound):
        g = 0
        for c in coords:
            g = gcd(g, c)
        if g != 1:
            continue
        if gens and any(f.evaluate(coords) != 0 for f in gens):
            continue
        yield ProjPoint(coords)
