"""Constructive tour heuristics instrumented with full step traces.

All three builders are deterministic: weight ties fall to the lowest vertex
index and then to lexicographic arc order, so the same instance and
parameters always produce the same trace.
"""

from __future__ import annotations

import numpy as np

from .instance import Arc, Instance, InstanceError, arc
from .trace import ConstructionStep, PartialSolution, Trace, apply_step

NN = "nn"
CHEAPEST_INSERTION = "cheapest-insertion"
GREEDY = "greedy"


def _finish(
    inst: Instance, heuristic: str, sol: PartialSolution, steps: list[ConstructionStep]
) -> Trace:
    beta_used = bool(inst.absent) and any(
        a in inst.absent for s in steps for a in s.a_new
    )
    return Trace(
        instance_name=inst.name,
        heuristic=heuristic,
        n=inst.n,
        steps=tuple(steps),
        final_arcs=tuple(sorted(sol.arcs)),
        final_weight=sol.weight,
        beta_used=beta_used,
    )


def nearest_neighbor(inst: Instance, start: int = 0) -> Trace:
    """Grow a path from ``start``, always to the cheapest unvisited vertex,
    then close the cycle.  n single-arc steps."""
    n = inst.n
    if not 0 <= start < n:
        raise InstanceError(f"start vertex {start} out of range for n={n}")
    visited = np.zeros(n, dtype=bool)
    visited[start] = True
    sol = PartialSolution.empty(n)
    steps: list[ConstructionStep] = []
    cur = start
    for _ in range(n - 1):
        row = np.where(visited, np.inf, inst.weights[cur])
        nxt = int(np.argmin(row))
        sol, s = apply_step(sol, [arc(cur, nxt)], [], inst)
        steps.append(s)
        visited[nxt] = True
        cur = nxt
    sol, s = apply_step(sol, [arc(cur, start)], [], inst)
    steps.append(s)
    return _finish(inst, NN, sol, steps)


def _min_arc(inst: Instance) -> Arc:
    iu, iv = np.triu_indices(inst.n, k=1)
    w = inst.weights[iu, iv]
    t = int(np.lexsort((iv, iu, w))[0])
    return arc(int(iu[t]), int(iv[t]))


def cheapest_insertion(inst: Instance) -> Trace:
    """Seed a 3-cycle, then repeatedly splice in the vertex/position pair
    with the smallest weight effect.

    The seed is recorded as three single-arc steps: the cheapest arc, then
    the two arcs to the vertex that closes the lightest 3-cycle over it.
    Each later step removes one cycle arc and adds two, so every step has
    m = 1. Total steps: n.
    """
    n = inst.n
    w = inst.weights
    seed = _min_arc(inst)
    others = np.array([k for k in range(n) if k not in (seed.u, seed.v)])
    extra = w[seed.u, others] + w[seed.v, others]
    third = int(others[int(np.argmin(extra))])

    sol = PartialSolution.empty(n)
    steps: list[ConstructionStep] = []
    sol, s = apply_step(sol, [seed], [], inst)
    steps.append(s)
    for a in sorted((arc(seed.u, third), arc(seed.v, third))):
        sol, s = apply_step(sol, [a], [], inst)
        steps.append(s)

    tour = [seed.u, seed.v, third]
    unvisited = sorted(set(range(n)) - set(tour))
    while unvisited:
        positions = sorted(
            range(len(tour)), key=lambda p: arc(tour[p], tour[(p + 1) % len(tour)])
        )
        best: tuple[int | float, int, int] | None = None
        for k in unvisited:
            for p in positions:
                a, b = tour[p], tour[(p + 1) % len(tour)]
                delta = w[a, k] + w[k, b] - w[a, b]
                if best is None or delta < best[0]:
                    best = (delta, k, p)
        assert best is not None
        _, k, p = best
        a, b = tour[p], tour[(p + 1) % len(tour)]
        sol, s = apply_step(sol, [arc(a, k), arc(k, b)], [arc(a, b)], inst)
        steps.append(s)
        tour.insert(p + 1, k)
        unvisited.remove(k)
    return _finish(inst, CHEAPEST_INSERTION, sol, steps)


def greedy_edge(inst: Instance) -> Trace:
    """Take arcs in ascending weight order, skipping any that would push a
    vertex to degree 3 or close a cycle early, then close the tour.
    n single-arc steps."""
    n = inst.n
    iu, iv = np.triu_indices(n, k=1)
    w = inst.weights[iu, iv]
    order = np.lexsort((iv, iu, w))
    sol = PartialSolution.empty(n)
    steps: list[ConstructionStep] = []
    for t in order:
        if len(sol.arcs) == n - 1:
            break
        u, v = int(iu[t]), int(iv[t])
        if sol.degree[u] == 2 or sol.degree[v] == 2:
            continue
        if sol.connected(u, v):
            continue
        sol, s = apply_step(sol, [arc(u, v)], [], inst)
        steps.append(s)
    # n-1 accepted arcs form a Hamiltonian path; join its two endpoints.
    ends = [v for v in range(n) if sol.degree[v] == 1]
    sol, s = apply_step(sol, [arc(ends[0], ends[1])], [], inst)
    steps.append(s)
    return _finish(inst, GREEDY, sol, steps)


HEURISTICS = {
    NN: nearest_neighbor,
    CHEAPEST_INSERTION: cheapest_insertion,
    GREEDY: greedy_edge,
}
