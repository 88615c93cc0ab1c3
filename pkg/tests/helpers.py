"""Shared fixtures data and independent mini-oracles for the tests.

The oracles here deliberately use a different route than the package
(pure-Python permutation scans, exact Fraction arithmetic) so frozen
expected values are cross-checked rather than copied.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from tourbench import Instance, make_instance

# Four vertices, three cheap path arcs, one costly closing arc.  Three
# distinct tours with weights 13, 6, 15; the optimum is 0-1-3-2-0.
D4_WEIGHTS = [
    [0, 1, 2, 10],
    [1, 0, 1, 2],
    [2, 1, 0, 1],
    [10, 2, 1, 0],
]

TRIANGLE_POINTS = [(0.0, 0.0), (3.0, 0.0), (0.0, 4.0)]


def d4_instance() -> Instance:
    return make_instance(4, D4_WEIGHTS, name="d4")


def ones_instance(n: int, name: str | None = None) -> Instance:
    w = [[0 if i == j else 1 for j in range(n)] for i in range(n)]
    return make_instance(n, w, name=name or f"ones-{n}")


def all_tours(n: int):
    """Each distinct cycle once, as 0-led tuples with second < last."""
    for perm in itertools.permutations(range(1, n)):
        if perm[0] < perm[-1]:
            yield (0,) + perm


def tour_cost(inst: Instance, tour) -> int | float:
    total = 0
    for a, b in zip(tour, tour[1:] + tuple(tour[:1])):
        total += inst.weight(a, b)
    return total


def slow_optimum(inst: Instance) -> int | float:
    """Reference optimum by plain enumeration, independent of the package."""
    return min(tour_cost(inst, t) for t in all_tours(inst.n))


def exact_harmonic(n: int) -> Fraction:
    return sum((Fraction(1, i) for i in range(1, n + 1)), Fraction(0))
