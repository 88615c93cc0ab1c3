"""Exact tour optima by exhaustive search and by dynamic programming.

Two independent routes to the same number: plain enumeration of all
distinct cyclic orders (small n) and a subset dynamic program (up to
n = 20).  Keeping both routes lets tests cross-check one against the
other on their shared domain.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .instance import Instance

BRUTE_LIMIT = 10
HELD_KARP_LIMIT = 20


class UnsupportedSizeError(ValueError):
    """Instance is outside the size range an exact method can handle."""


@dataclass(frozen=True)
class OracleResult:
    value: int | float
    tour: tuple[int, ...]
    method: str


# Tours for size n share the same vertex orders regardless of weights, so
# the enumeration table is built once per n and reused.
_TOUR_CACHE: dict[int, np.ndarray] = {}


def _canonical_tours(n: int) -> np.ndarray:
    """All distinct cycles as rows [0, p1, .., pn-1] with p1 < pn-1.

    Fixing vertex 0 first kills rotations; requiring the second vertex to
    be smaller than the last kills reflections, and also makes each row the
    lexicographically smaller representation of its cycle.  Rows ascend
    lexicographically.
    """
    cached = _TOUR_CACHE.get(n)
    if cached is None:
        perms = np.array(list(itertools.permutations(range(1, n))), dtype=np.int8)
        perms = perms[perms[:, 0] < perms[:, -1]]
        cached = np.concatenate(
            [np.zeros((perms.shape[0], 1), dtype=np.int8), perms], axis=1
        )
        _TOUR_CACHE[n] = cached
    return cached


def brute_force_opt(inst: Instance) -> OracleResult:
    """Minimum over every distinct tour; ties go to the lexicographically
    least tour.  Practical for n <= 10."""
    n = inst.n
    if n > BRUTE_LIMIT:
        raise UnsupportedSizeError(
            f"exhaustive search supports n <= {BRUTE_LIMIT}, got n={n}"
        )
    tours = _canonical_tours(n)
    w = inst.weights
    heads = tours[:, :-1].ravel()
    tails = tours[:, 1:].ravel()
    totals = w[heads, tails].reshape(tours.shape[0], n - 1).sum(axis=1)
    totals = totals + w[tours[:, -1], 0]
    best = int(np.argmin(totals))  # first minimum = lexicographically least row
    return OracleResult(
        value=totals[best].item(),
        tour=tuple(int(x) for x in tours[best]),
        method="brute",
    )


def held_karp_opt(inst: Instance) -> OracleResult:
    """Subset dynamic program over paths from vertex 0.

    dp[mask, j] is the cheapest path that starts at 0, visits exactly the
    vertices in mask, and ends at j.  Only masks containing vertex 0 (odd
    masks) are ever populated, and masks are processed in increasing order
    so every submask is final before it is expanded.  Weights are carried
    in float64, which is exact for the integer magnitudes involved; the
    table takes 8 * n * 2^n bytes (about 168 MB at the n = 20 cap).
    """
    n = inst.n
    if not 3 <= n <= HELD_KARP_LIMIT:
        raise UnsupportedSizeError(
            f"the dynamic program supports 3 <= n <= {HELD_KARP_LIMIT}, got n={n}"
        )
    w = inst.weights.astype(np.float64)
    size = 1 << n
    bits = (1 << np.arange(n)).astype(np.int64)
    dp = np.full((size, n), np.inf)
    dp[1, 0] = 0.0
    for mask in range(1, size - 1, 2):
        inside = (mask & bits) != 0
        cur = dp[mask]
        ks = np.nonzero(inside & (cur < np.inf))[0]
        if ks.size == 0:
            continue
        js = np.nonzero(~inside)[0]
        cand = cur[ks, None] + w[np.ix_(ks, js)]
        relaxed = cand.min(axis=0)
        targets = mask | bits[js]
        dp[targets, js] = np.minimum(dp[targets, js], relaxed)
    full = size - 1
    closing = dp[full] + w[:, 0]
    end = int(np.argmin(closing))
    value = closing[end]

    # Backtrack: the recomputed candidate sums are bit-identical to the
    # stored minima, so exact float equality recovers a valid predecessor.
    order = [end]
    mask, j = full, end
    while mask != 1:
        pmask = mask ^ (1 << j)
        prev = dp[pmask] + w[:, j]
        inside = (pmask & bits) != 0
        k = int(np.nonzero(inside & (prev == dp[mask, j]))[0][0])
        order.append(k)
        mask, j = pmask, k
    order.reverse()  # now starts at 0
    if n >= 3 and order[1] > order[-1]:
        order[1:] = order[:0:-1]
    out_value: int | float = value.item()
    if inst.integral:
        out_value = int(out_value)
    return OracleResult(value=out_value, tour=tuple(order), method="held-karp")


def optimum(inst: Instance, cross_check: bool = False) -> OracleResult:
    """Exact optimum for n <= 20.

    With ``cross_check`` (n <= 10 only) both methods run and must agree;
    the enumeration result is returned since its tie-break is total.
    """
    n = inst.n
    if n > HELD_KARP_LIMIT:
        raise UnsupportedSizeError(
            f"exact optimum supports n <= {HELD_KARP_LIMIT}, got n={n}"
        )
    if cross_check:
        if n > BRUTE_LIMIT:
            raise UnsupportedSizeError(
                f"cross-checking needs n <= {BRUTE_LIMIT}, got n={n}"
            )
        brute = brute_force_opt(inst)
        dyn = held_karp_opt(inst)
        if not _values_agree(brute.value, dyn.value):
            raise RuntimeError(
                f"oracle disagreement on {inst.name}: "
                f"enumeration {brute.value} vs dynamic program {dyn.value}"
            )
        return brute
    return held_karp_opt(inst)


def _values_agree(a: int | float, b: int | float) -> bool:
    if isinstance(a, int) and isinstance(b, int):
        return a == b
    return abs(a - b) <= 1e-9 * max(1.0, abs(a), abs(b))


def tour_weight(inst: Instance, tour: tuple[int, ...]) -> int | float:
    """Recompute a tour's weight from the instance, for audits.

    ``tour`` must visit every vertex exactly once.
    """
    if sorted(tour) != list(range(inst.n)):
        raise ValueError(f"tour {tour} is not a permutation of 0..{inst.n - 1}")
    total: int | float = 0
    for a, b in zip(tour, tour[1:] + tour[:1]):
        total += inst.weight(a, b)
    return total
