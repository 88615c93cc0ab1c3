"""Complete weighted symmetric graph instances with an absent-arc sentinel.

An instance is a dense n-by-n weight matrix over vertices 0..n-1.  Arcs that
are not really part of the graph are stored with a sentinel weight ``beta``
chosen larger than any tour that avoids them can ever weigh, so minimising
construction and exact search can treat every instance as complete while
still preferring any sentinel-free tour.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

# Weight matrices are stored as int64 by default.  Large instances drop to
# int32 when every value (including the sentinel) fits, halving memory.
_INT32_LIMIT = 2**31 - 2
_INT32_MIN_N = 4096

# Block row count for pairwise-distance computation keeps the float64
# intermediate under ~32 MB regardless of instance size.
_DIST_BLOCK_ELEMS = 4 * 1024 * 1024


class InstanceError(ValueError):
    """Instance data violates a structural requirement."""


class Arc(NamedTuple):
    """Undirected arc with endpoints stored canonically as u < v."""

    u: int
    v: int


def arc(u: int, v: int) -> Arc:
    """Build a canonical arc. Rejects self-loops and negative endpoints."""
    if u == v:
        raise InstanceError(f"self-loop arc ({u}, {v})")
    if u < 0 or v < 0:
        raise InstanceError(f"negative vertex in arc ({u}, {v})")
    return Arc(u, v) if u < v else Arc(v, u)


@dataclass(frozen=True, eq=False)
class Instance:
    """Immutable complete instance.

    ``weights`` is a dense symmetric matrix with a zero diagonal; positions
    listed in ``absent`` hold ``beta``.  Use :func:`make_instance` or
    :func:`euclidean_from_points` rather than constructing directly.
    """

    n: int
    weights: np.ndarray
    beta: int | float
    name: str
    absent: frozenset[Arc]

    @property
    def integral(self) -> bool:
        """True when every weight is an exact integer."""
        return self.weights.dtype.kind in "iu"

    def weight(self, u: int, v: int) -> int | float:
        """Weight of arc (u, v) as a plain Python scalar."""
        if u == v:
            raise InstanceError(f"no arc between {u} and itself")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise InstanceError(f"vertex out of range in ({u}, {v}) for n={self.n}")
        return self.weights[u, v].item()

    def weight_of(self, a: Arc) -> int | float:
        return self.weight(a[0], a[1])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (
            self.n == other.n
            and self.name == other.name
            and self.beta == other.beta
            and self.absent == other.absent
            and np.array_equal(self.weights, other.weights)
        )


def _freeze(mat: np.ndarray) -> np.ndarray:
    mat.flags.writeable = False
    return mat


def _beta_for(n: int, max_finite: int | float, integral: bool) -> int | float:
    # Strictly dominates any sentinel-free tour: n arcs each at most max_finite.
    if integral:
        return n * int(max_finite) + 1
    return n * float(max_finite) + 1.0


def _coerce_array(weights: np.ndarray, n: int) -> tuple[np.ndarray, bool]:
    if weights.shape != (n, n):
        raise InstanceError(f"weight matrix must be {n}x{n}, got shape {weights.shape}")
    kind = weights.dtype.kind
    if kind in "iu":
        return weights.astype(np.int64), True
    if kind == "f":
        mat = weights.astype(np.float64)
        if not np.isfinite(mat).all():
            raise InstanceError("weights must be finite numbers")
        return mat, False
    raise InstanceError(f"unsupported weight dtype: {weights.dtype}")


def _coerce_rows(
    weights: Sequence[Sequence[object]], n: int
) -> tuple[np.ndarray, set[Arc], bool]:
    rows = list(weights)
    if len(rows) != n:
        raise InstanceError(f"weight matrix must have {n} rows, got {len(rows)}")
    absent: set[tuple[int, int]] = set()
    integral = True
    values = [[0.0] * n for _ in range(n)]
    for i, row in enumerate(rows):
        row = list(row)
        if len(row) != n:
            raise InstanceError(f"row {i} has {len(row)} entries, expected {n}")
        for j, x in enumerate(row):
            if x is None:
                if i != j:
                    absent.add((i, j))
                continue
            if isinstance(x, bool):
                raise InstanceError(f"weight at ({i}, {j}) is a bool")
            if isinstance(x, int):
                values[i][j] = x
            elif isinstance(x, float):
                if not np.isfinite(x):
                    raise InstanceError(f"weight at ({i}, {j}) is not finite")
                values[i][j] = x
                integral = False
            elif isinstance(x, Fraction):
                # Rational weights are carried as float64; comparisons made
                # against them elsewhere use a 1e-9 relative tolerance.
                values[i][j] = float(x)
                integral = False
            else:
                raise InstanceError(f"weight at ({i}, {j}) has unsupported type {type(x).__name__}")
    for i, j in absent:
        if (j, i) not in absent:
            raise InstanceError(f"absent arc ({i}, {j}) is not marked absent in both directions")
    arcs = {arc(i, j) for i, j in absent}
    if integral:
        try:
            mat = np.array([[int(x) for x in row] for row in values], dtype=np.int64)
        except OverflowError as exc:
            raise InstanceError("integer weight exceeds the supported 64-bit range") from exc
    else:
        mat = np.array(values, dtype=np.float64)
    return mat, arcs, integral


def make_instance(
    n: int,
    weights: Sequence[Sequence[object]] | np.ndarray,
    name: str = "instance",
) -> Instance:
    """Validate raw weights and build an :class:`Instance`.

    ``weights`` must be an n-by-n symmetric matrix of nonnegative numbers.
    ``None`` entries (mirrored on both sides) mark an arc as absent; such
    positions are stored with the sentinel ``beta = n * max_finite + 1``.
    Diagonal entries are unused and normalised to zero.
    """
    if n < 3:
        raise InstanceError(f"an instance needs at least 3 vertices, got n={n}")
    if isinstance(weights, np.ndarray) and weights.dtype != object:
        mat, integral = _coerce_array(weights, n)
        absent: set[Arc] = set()
    else:
        mat, absent, integral = _coerce_rows(weights, n)
    np.fill_diagonal(mat, 0)
    if not np.array_equal(mat, mat.T):
        raise InstanceError("weight matrix is not symmetric")
    if (mat < 0).any():
        raise InstanceError("weights must be nonnegative")
    max_finite = mat.max().item() if n else 0
    beta = _beta_for(n, max_finite, integral)
    for a in absent:
        mat[a.u, a.v] = beta
        mat[a.v, a.u] = beta
    if integral and n >= _INT32_MIN_N:
        peak = beta if absent else max_finite
        if peak <= _INT32_LIMIT:
            mat = mat.astype(np.int32)
    return Instance(n=n, weights=_freeze(mat), beta=beta, name=name, absent=frozenset(absent))


def euclidean_from_points(
    points: Sequence[Sequence[float]] | np.ndarray,
    name: str = "euclidean",
) -> Instance:
    """Instance from planar points with distances rounded to nearest integer.

    Rounding follows the TSPLIB convention nint(d) = floor(d + 0.5).  The
    matrix is built in row blocks so the float64 intermediate stays small
    even for tens of thousands of points.
    """
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise InstanceError("points must be a sequence of (x, y) pairs")
    n = pts.shape[0]
    if n < 3:
        raise InstanceError(f"an instance needs at least 3 points, got {n}")
    if not np.isfinite(pts).all():
        raise InstanceError("coordinates must be finite")
    span = float(np.hypot(np.ptp(pts[:, 0]), np.ptp(pts[:, 1])))
    dtype = np.int32 if (n >= _INT32_MIN_N and span + 1 <= _INT32_LIMIT) else np.int64
    mat = np.empty((n, n), dtype=dtype)
    block = max(1, _DIST_BLOCK_ELEMS // n)
    xs, ys = pts[:, 0], pts[:, 1]
    for lo in range(0, n, block):
        hi = min(n, lo + block)
        d = np.hypot(xs[lo:hi, None] - xs[None, :], ys[lo:hi, None] - ys[None, :])
        mat[lo:hi] = np.floor(d + 0.5).astype(dtype)
    np.fill_diagonal(mat, 0)
    beta = _beta_for(n, mat.max().item(), integral=True)
    return Instance(n=n, weights=_freeze(mat), beta=beta, name=name, absent=frozenset())


def arc_weight(inst: Instance, a: Arc) -> int | float:
    """Weight of ``a`` in ``inst``; arcs marked absent report ``beta``."""
    return inst.weight(a[0], a[1])


def is_metric(inst: Instance, rel_tol: float = 1e-9) -> bool:
    """True when the finite weights satisfy the triangle inequality.

    Any absent arc makes the answer False, since the sentinel weight is not
    a distance.  The check is O(n^3); intended for desk-scale instances.
    """
    if inst.absent:
        return False
    w = inst.weights
    if inst.integral:
        w = w.astype(np.int64, copy=False)
        tol: int | float = 0
    else:
        tol = rel_tol * max(1.0, float(w.max()))
    for v in range(inst.n):
        if not (w <= w[:, v, None] + w[None, v, :] + tol).all():
            return False
    return True
