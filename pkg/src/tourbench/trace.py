"""Step-by-step accounting for constructive tour building.

A construction run is a sequence of moves, each adding ``m >= 1`` net arcs
to the partial solution (insertions also remove arcs).  Every move records
its weight effect ``delta_a`` together with the solution weight before and
after, so the whole run can be audited without re-running the heuristic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .instance import Arc, Instance, InstanceError, arc


class StepError(ValueError):
    """A move is structurally impossible for the current partial solution."""


class TraceMismatchError(ValueError):
    """A trace was paired with data from a different instance."""


def _is_int(x: object) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _close(a: int | float, b: int | float) -> bool:
    """Exact comparison for ints, 1e-9 relative tolerance otherwise."""
    if _is_int(a) and _is_int(b):
        return a == b
    return math.isclose(a, b, rel_tol=1e-9, abs_tol=1e-9)


class UnionFind:
    """Array-based union-find with path compression and union by size."""

    def __init__(self, n: int) -> None:
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True


@dataclass
class PartialSolution:
    """Mutable arc set under construction. Single-threaded use only."""

    n: int
    arcs: set[Arc]
    weight: int | float
    degree: list[int]
    _uf: UnionFind
    _uf_stale: bool = False

    @classmethod
    def empty(cls, n: int) -> "PartialSolution":
        return cls(n=n, arcs=set(), weight=0, degree=[0] * n, _uf=UnionFind(n))

    def _refresh_components(self) -> None:
        if self._uf_stale:
            uf = UnionFind(self.n)
            for a in self.arcs:
                uf.union(a.u, a.v)
            self._uf = uf
            self._uf_stale = False

    def connected(self, u: int, v: int) -> bool:
        self._refresh_components()
        return self._uf.find(u) == self._uf.find(v)


@dataclass(frozen=True)
class ConstructionStep:
    """One constructive move.

    ``i`` is the arc count of the solution before the move, ``m`` the net
    number of arcs added, ``delta_a`` the weight effect.  The derived
    quantities ``r`` (relative weight growth) and ``rho`` (average-arc
    ratio) are computed from these fields on demand; they are exact
    fractions whenever the inputs are integers.
    """

    i: int
    a_new: tuple[Arc, ...]
    a_old: tuple[Arc, ...]
    m: int
    delta_a: int | float
    w_before: int | float
    w_after: int | float

    @property
    def r(self) -> Fraction | float | None:
        """1 + delta_a / w_before, or None when the solution weighed 0."""
        if self.w_before == 0:
            return None
        if _is_int(self.delta_a) and _is_int(self.w_before):
            return 1 + Fraction(self.delta_a, self.w_before)
        return 1.0 + self.delta_a / self.w_before

    @property
    def rho(self) -> Fraction | float | None:
        """(i / (i + m)) * r, or None when r is undefined or i < 1."""
        r = self.r
        if r is None or self.i < 1:
            return None
        if isinstance(r, Fraction):
            return Fraction(self.i, self.i + self.m) * r
        return (self.i / (self.i + self.m)) * r

    @property
    def r_outside_bound_domain(self) -> bool:
        """True for defined ratios at i = 1, where the growth-chain argument
        does not apply yet but the value is still worth recording."""
        return self.w_before != 0 and self.i < 2


def step_ratio(step: ConstructionStep) -> Fraction | float | None:
    """Relative weight growth of a step; None when undefined.

    Defined values with ``step.i < 2`` are returned as well; callers that
    care can consult ``step.r_outside_bound_domain``.
    """
    return step.r


class AvArcVerdict(Enum):
    SATISFIED = "satisfied"
    VIOLATED = "violated"
    UNDEFINED = "undefined"


def check_avarc(step: ConstructionStep) -> AvArcVerdict:
    """Did the step keep its average arc weight within the m/i budget?

    Satisfied exactly when delta_a / w_before <= m / i, which is the same
    condition as rho <= 1.  Undefined when w_before = 0 or i = 0.  Integer
    inputs are compared by cross-multiplication, so the verdict is exact.
    """
    if step.w_before == 0 or step.i == 0:
        return AvArcVerdict.UNDEFINED
    if _is_int(step.delta_a) and _is_int(step.w_before):
        ok = step.delta_a * step.i <= step.m * step.w_before
    else:
        ok = step.delta_a / step.w_before <= step.m / step.i
    return AvArcVerdict.SATISFIED if ok else AvArcVerdict.VIOLATED


def _check_arc_for(inst: Instance, a: Arc) -> None:
    if not isinstance(a, Arc):
        raise StepError(f"expected an Arc, got {type(a).__name__}")
    if a.u == a.v:
        raise StepError(f"self-loop arc {tuple(a)}")
    if a.u > a.v:
        raise StepError(f"arc {tuple(a)} is not in canonical (u < v) order")
    if not (0 <= a.u < inst.n and 0 <= a.v < inst.n):
        raise StepError(f"arc {tuple(a)} out of range for n={inst.n}")


def apply_step(
    sol: PartialSolution,
    a_new: Iterable[Arc],
    a_old: Iterable[Arc],
    inst: Instance,
) -> tuple[PartialSolution, ConstructionStep]:
    """Apply one move to ``sol`` in place and return the recorded step.

    ``a_new`` must be disjoint from the current arcs, ``a_old`` contained in
    them, and the net arc count must grow by at least 1.
    """
    if sol.n != inst.n:
        raise TraceMismatchError(f"solution is over n={sol.n}, instance has n={inst.n}")
    new = tuple(a_new)
    old = tuple(a_old)
    for a in new + old:
        _check_arc_for(inst, a)
    if len(set(new)) != len(new):
        raise StepError("duplicate arc in a_new")
    if len(set(old)) != len(old):
        raise StepError("duplicate arc in a_old")
    m = len(new) - len(old)
    if m < 1:
        raise StepError(f"a move must grow the solution: m={m}")
    for a in old:
        if a not in sol.arcs:
            raise StepError(f"cannot remove arc {tuple(a)}: not in the solution")
    for a in new:
        if a in sol.arcs:
            raise StepError(f"cannot add arc {tuple(a)}: already in the solution")
    delta = sum(inst.weight_of(a) for a in new) - sum(inst.weight_of(a) for a in old)
    i = len(sol.arcs)
    w_before = sol.weight
    w_after = w_before + delta
    for a in old:
        sol.arcs.discard(a)
        sol.degree[a.u] -= 1
        sol.degree[a.v] -= 1
        sol._uf_stale = True
    for a in new:
        sol.arcs.add(a)
        sol.degree[a.u] += 1
        sol.degree[a.v] += 1
        if not sol._uf_stale:
            sol._uf.union(a.u, a.v)
    sol.weight = w_after
    step = ConstructionStep(
        i=i, a_new=new, a_old=old, m=m, delta_a=delta, w_before=w_before, w_after=w_after
    )
    return sol, step


@dataclass(frozen=True)
class Trace:
    """Complete record of one construction run."""

    instance_name: str
    heuristic: str
    n: int
    steps: tuple[ConstructionStep, ...]
    final_arcs: tuple[Arc, ...]
    final_weight: int | float
    beta_used: bool = False


@dataclass(frozen=True)
class Violation:
    """One broken audit rule, anchored to a step index when applicable."""

    rule: str
    step: int | None
    detail: str

    def __str__(self) -> str:
        where = f" at step {self.step}" if self.step is not None else ""
        return f"{self.rule}{where}: {self.detail}"


def validate_trace(trace: Trace, inst: Instance) -> list[Violation]:
    """Audit a trace against its instance; empty list means fully consistent.

    Checks step chaining, per-step arithmetic against the instance weights,
    telescoping of the final weight, arc membership during replay, and that
    the final arc set is a single cycle covering every vertex.
    """
    if trace.n != inst.n:
        raise TraceMismatchError(f"trace has n={trace.n}, instance has n={inst.n}")
    out: list[Violation] = []
    arcs: set[Arc] = set()
    degree = [0] * inst.n
    prev_after: int | float = 0
    delta_total: int | float = 0
    saw_beta = False

    for k, s in enumerate(trace.steps):
        bad_arc = False
        for a in s.a_new + s.a_old:
            try:
                _check_arc_for(inst, a)
            except StepError as exc:
                out.append(Violation("arc-range", k, str(exc)))
                bad_arc = True
        if s.m != len(s.a_new) - len(s.a_old) or s.m < 1:
            out.append(
                Violation(
                    "m-invariant",
                    k,
                    f"m={s.m} but |a_new|-|a_old|={len(s.a_new) - len(s.a_old)}",
                )
            )
        if not _close(s.w_before, prev_after):
            out.append(
                Violation("chaining", k, f"w_before={s.w_before}, previous w_after={prev_after}")
            )
        if not _close(s.w_after, s.w_before + s.delta_a):
            out.append(
                Violation(
                    "step-arithmetic",
                    k,
                    f"w_after={s.w_after} but w_before + delta_a = {s.w_before + s.delta_a}",
                )
            )
        if s.i != len(arcs):
            out.append(Violation("step-index", k, f"i={s.i} but solution held {len(arcs)} arcs"))
        if not bad_arc:
            expected = sum(inst.weight_of(a) for a in s.a_new) - sum(
                inst.weight_of(a) for a in s.a_old
            )
            if not _close(s.delta_a, expected):
                out.append(
                    Violation(
                        "delta-mismatch", k, f"delta_a={s.delta_a}, instance weights give {expected}"
                    )
                )
        for a in s.a_old:
            if a in arcs:
                arcs.discard(a)
                degree[a.u] -= 1
                degree[a.v] -= 1
            else:
                out.append(Violation("step-membership", k, f"removed arc {tuple(a)} not present"))
        for a in s.a_new:
            if a in arcs:
                out.append(Violation("step-membership", k, f"added arc {tuple(a)} already present"))
            else:
                arcs.add(a)
                if 0 <= a.u < inst.n and 0 <= a.v < inst.n:
                    degree[a.u] += 1
                    degree[a.v] += 1
                if a in inst.absent:
                    saw_beta = True
        prev_after = s.w_after
        delta_total += s.delta_a

    if len(set(trace.final_arcs)) != len(trace.final_arcs):
        out.append(Violation("final-arcs", None, "duplicate arcs in final_arcs"))
    if set(trace.final_arcs) != arcs:
        out.append(Violation("final-arcs", None, "final_arcs differ from the replayed arc set"))
    if len(trace.final_arcs) != inst.n:
        out.append(
            Violation(
                "final-cardinality", None, f"|final_arcs| = {len(trace.final_arcs)} != {inst.n}"
            )
        )
    if not _close(trace.final_weight, delta_total):
        out.append(
            Violation(
                "telescoping",
                None,
                f"final_weight={trace.final_weight} but steps telescope to {delta_total}",
            )
        )
    if trace.steps and not _close(trace.final_weight, trace.steps[-1].w_after):
        out.append(
            Violation(
                "telescoping",
                None,
                f"final_weight={trace.final_weight} != last w_after={trace.steps[-1].w_after}",
            )
        )
    bad_degrees = [v for v in range(inst.n) if degree[v] != 2]
    if bad_degrees:
        out.append(
            Violation("degree", None, f"vertices with degree != 2 after replay: {bad_degrees}")
        )
    elif len(arcs) == inst.n:
        uf = UnionFind(inst.n)
        for a in arcs:
            uf.union(a.u, a.v)
        roots = {uf.find(v) for v in range(inst.n)}
        if len(roots) != 1:
            out.append(Violation("connectivity", None, f"{len(roots)} components in final arcs"))
    if trace.beta_used != saw_beta:
        out.append(
            Violation(
                "beta-flag",
                None,
                f"beta_used={trace.beta_used} but replay saw sentinel arcs: {saw_beta}",
            )
        )
    return out
