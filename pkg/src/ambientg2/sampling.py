"""Seeded exact rational sample points for identity testing."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Iterable

NONZERO = frozenset({"t", "E"})


def random_rational(rng: random.Random, *, nonzero: bool = False, height: int = 9) -> Fraction:
    while True:
        v = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if v or not nonzero:
            return v


def random_point(rng: random.Random, names: Iterable[str]) -> dict[str, Fraction]:
    """A rational value for every name; ``t`` and exponential generators are kept nonzero."""
    return {n: random_rational(rng, nonzero=n in NONZERO or n.startswith("E")) for n in sorted(names)}
