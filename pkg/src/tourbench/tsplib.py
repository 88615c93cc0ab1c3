"""Reading and writing instances, traces, and reports.

Instances travel as a strict subset of the TSPLIB text format: symmetric
TSP with EUC_2D coordinates or an EXPLICIT FULL_MATRIX section.  Traces
round-trip through JSON losslessly; reports serialize one way to JSON or a
one-row CSV.  Random instances come from seeded PCG64 generators, so equal
seeds give byte-identical artifacts on every platform.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterator

import numpy as np

from .bounds import BoundReport
from .instance import Instance, InstanceError, arc, euclidean_from_points, make_instance
from .trace import ConstructionStep, Trace

GRID = 10_000  # coordinate range for generated Euclidean instances
METRIC_WEIGHT_MAX = 1_000


class TsplibError(ValueError):
    """Instance text violates the supported TSPLIB subset."""


class TraceJsonError(ValueError):
    """Trace JSON is malformed; the message names the offending field."""


_HEADER_KEYS = {"NAME", "TYPE", "COMMENT", "DIMENSION", "EDGE_WEIGHT_TYPE", "EDGE_WEIGHT_FORMAT"}
_SECTION_KEYS = {"NODE_COORD_SECTION", "EDGE_WEIGHT_SECTION"}


def parse_tsplib(text: str) -> Instance:
    """Parse the supported TSPLIB subset into an Instance.

    Requires TYPE: TSP, a DIMENSION of at least 3, and an EDGE_WEIGHT_TYPE
    of EUC_2D (with NODE_COORD_SECTION) or EXPLICIT (with FULL_MATRIX and
    EDGE_WEIGHT_SECTION).  Unknown keywords are rejected rather than
    skipped.
    """
    headers: dict[str, str] = {}
    coords: list[tuple[int, float, float]] | None = None
    matrix_tokens: list[int] | None = None
    lines = iter(text.splitlines())
    ended = False
    for raw in lines:
        line = raw.strip()
        if not line:
            continue
        if ended:
            raise TsplibError(f"content after EOF: {line!r}")
        word = line.split(":", 1)[0].strip().upper()
        if word == "EOF":
            ended = True
            continue
        if word in _SECTION_KEYS:
            n = _require_dimension(headers, word)
            if word == "NODE_COORD_SECTION":
                coords = _read_coords(lines, n)
            else:
                matrix_tokens = _read_matrix_tokens(lines, n)
            continue
        if word not in _HEADER_KEYS:
            raise TsplibError(f"unknown keyword: {word}")
        if ":" not in line:
            raise TsplibError(f"header {word} is missing a value")
        headers[word] = line.split(":", 1)[1].strip()

    kind = headers.get("TYPE")
    if kind is None:
        raise TsplibError("missing TYPE header")
    if kind.upper() != "TSP":
        raise TsplibError(f"unsupported TYPE: {kind}")
    n = _require_dimension(headers, "instance body")
    name = headers.get("NAME", "instance")
    weight_type = headers.get("EDGE_WEIGHT_TYPE")
    if weight_type is None:
        raise TsplibError("missing EDGE_WEIGHT_TYPE header")
    weight_type = weight_type.upper()
    if weight_type == "EUC_2D":
        if matrix_tokens is not None:
            raise TsplibError("EDGE_WEIGHT_SECTION is not valid with EUC_2D")
        if coords is None:
            raise TsplibError("EUC_2D requires a NODE_COORD_SECTION")
        points = _order_coords(coords, n)
        return euclidean_from_points(points, name=name)
    if weight_type == "EXPLICIT":
        fmt = headers.get("EDGE_WEIGHT_FORMAT")
        if fmt is None or fmt.upper() != "FULL_MATRIX":
            raise TsplibError(f"EXPLICIT weights require EDGE_WEIGHT_FORMAT: FULL_MATRIX, got {fmt}")
        if coords is not None:
            raise TsplibError("NODE_COORD_SECTION is not valid with EXPLICIT weights")
        if matrix_tokens is None:
            raise TsplibError("EXPLICIT weights require an EDGE_WEIGHT_SECTION")
        rows = [matrix_tokens[i * n : (i + 1) * n] for i in range(n)]
        return make_instance(n, rows, name=name)
    raise TsplibError(f"unsupported EDGE_WEIGHT_TYPE: {weight_type}")


def _require_dimension(headers: dict[str, str], context: str) -> int:
    dim = headers.get("DIMENSION")
    if dim is None:
        raise TsplibError(f"DIMENSION must appear before {context}")
    try:
        n = int(dim)
    except ValueError as exc:
        raise TsplibError(f"DIMENSION is not an integer: {dim!r}") from exc
    if n < 3:
        raise TsplibError(f"DIMENSION must be at least 3, got {n}")
    return n


def _read_coords(lines: Iterator[str], n: int) -> list[tuple[int, float, float]]:
    out: list[tuple[int, float, float]] = []
    while len(out) < n:
        try:
            line = next(lines).strip()
        except StopIteration as exc:
            raise TsplibError(
                f"NODE_COORD_SECTION ended after {len(out)} of {n} entries"
            ) from exc
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise TsplibError(f"bad coordinate line: {line!r}")
        try:
            out.append((int(parts[0]), float(parts[1]), float(parts[2])))
        except ValueError as exc:
            raise TsplibError(f"bad coordinate line: {line!r}") from exc
    return out


def _order_coords(coords: list[tuple[int, float, float]], n: int) -> list[tuple[float, float]]:
    seen: dict[int, tuple[float, float]] = {}
    for idx, x, y in coords:
        if idx in seen:
            raise TsplibError(f"duplicate coordinate index {idx}")
        seen[idx] = (x, y)
    if set(seen) != set(range(1, n + 1)):
        raise TsplibError(f"coordinate indices must cover 1..{n} exactly")
    return [seen[i] for i in range(1, n + 1)]


def _read_matrix_tokens(lines: Iterator[str], n: int) -> list[int]:
    need = n * n
    out: list[int] = []
    while len(out) < need:
        try:
            line = next(lines).strip()
        except StopIteration as exc:
            raise TsplibError(
                f"EDGE_WEIGHT_SECTION holds {len(out)} values, dimension needs {need}"
            ) from exc
        if not line:
            continue
        for tok in line.split():
            try:
                out.append(int(tok))
            except ValueError as exc:
                raise TsplibError(f"non-integer weight entry: {tok!r}") from exc
    if len(out) > need:
        raise TsplibError(f"EDGE_WEIGHT_SECTION holds {len(out)} values, dimension needs {need}")
    return out


def emit_tsplib(inst: Instance) -> str:
    """Serialize an instance as EXPLICIT FULL_MATRIX text.

    Only integer-weighted instances can be written.  Sentinel weights for
    absent arcs are written as their numeric value; absence marking itself
    is not part of the format.
    """
    if not inst.integral:
        raise TsplibError("only integer-weighted instances can be emitted")
    if inst.name != inst.name.strip() or any(c in inst.name for c in "\r\n"):
        raise TsplibError(f"instance name {inst.name!r} cannot be written")
    lines = [
        f"NAME: {inst.name}",
        "TYPE: TSP",
        f"DIMENSION: {inst.n}",
        "EDGE_WEIGHT_TYPE: EXPLICIT",
        "EDGE_WEIGHT_FORMAT: FULL_MATRIX",
        "EDGE_WEIGHT_SECTION",
    ]
    for row in inst.weights.tolist():
        lines.append(" ".join(str(x) for x in row))
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def emit_euc2d(points: np.ndarray, name: str) -> str:
    """Serialize integer points as EUC_2D coordinate text."""
    if any(c in name for c in "\r\n") or name != name.strip():
        raise TsplibError(f"instance name {name!r} cannot be written")
    pts = np.asarray(points)
    lines = [
        f"NAME: {name}",
        "TYPE: TSP",
        f"DIMENSION: {len(pts)}",
        "EDGE_WEIGHT_TYPE: EUC_2D",
        "NODE_COORD_SECTION",
    ]
    for idx, (x, y) in enumerate(pts.tolist(), start=1):
        lines.append(f"{idx} {x} {y}")
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def _seeded_rng(seed: int) -> np.random.Generator:
    # PCG64 keyed by the integer seed: documented, stable across platforms.
    return np.random.Generator(np.random.PCG64(seed))


def gen_random_euclidean_points(n: int, seed: int) -> np.ndarray:
    """The point set behind gen_random_euclidean, for coordinate output."""
    if n < 3:
        raise InstanceError(f"generated instances need n >= 3, got {n}")
    rng = _seeded_rng(seed)
    return rng.integers(0, GRID, size=(n, 2))


def gen_random_euclidean(n: int, seed: int) -> Instance:
    """Uniform random points on the [0, GRID) integer grid."""
    pts = gen_random_euclidean_points(n, seed)
    return euclidean_from_points(pts, name=f"euc-n{n}-s{seed}")


def gen_random_metric(n: int, seed: int) -> Instance:
    """Random symmetric weights in [1, METRIC_WEIGHT_MAX], closed under
    shortest paths so the triangle inequality holds exactly."""
    if n < 3:
        raise InstanceError(f"generated instances need n >= 3, got {n}")
    rng = _seeded_rng(seed)
    raw = rng.integers(1, METRIC_WEIGHT_MAX + 1, size=(n, n)).astype(np.int64)
    w = np.triu(raw, k=1)
    w = w + w.T
    for k in range(n):
        np.minimum(w, w[:, k, None] + w[None, k, :], out=w)
    np.fill_diagonal(w, 0)
    return make_instance(n, w, name=f"metric-n{n}-s{seed}")


# --- trace JSON -----------------------------------------------------------

_STEP_FIELDS = ("i", "a_new", "a_old", "m", "delta_a", "w_before", "w_after")
_TRACE_FIELDS = ("instance_name", "heuristic", "n", "steps", "final_arcs", "final_weight", "beta_used")


def _encode_weight(x: int | float | Fraction) -> int | str:
    # Integers stay JSON integers; anything else becomes a decimal (or p/q)
    # string so no precision is lost in transit.
    if isinstance(x, bool):
        raise TraceJsonError(f"boolean weight {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return repr(float(x))


def _decode_weight(x: object, field: str) -> int | float | Fraction:
    if isinstance(x, bool):
        raise TraceJsonError(f"field {field} must be a number, got a bool")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            if "/" in x:
                return Fraction(x)
            return float(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise TraceJsonError(f"field {field} holds an unreadable number: {x!r}") from exc
    raise TraceJsonError(f"field {field} must be an integer or a numeric string")


def _encode_arcs(arcs: tuple) -> list[list[int]]:
    return [[a.u, a.v] for a in arcs]


def _decode_arcs(x: object, field: str) -> tuple:
    if not isinstance(x, list):
        raise TraceJsonError(f"field {field} must be a list of [u, v] pairs")
    out = []
    for pos, item in enumerate(x):
        where = f"{field}[{pos}]"
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(e, int) and not isinstance(e, bool) for e in item)
        ):
            raise TraceJsonError(f"field {where} must be an [u, v] integer pair")
        try:
            out.append(arc(item[0], item[1]))
        except InstanceError as exc:
            raise TraceJsonError(f"field {where}: {exc}") from exc
    return tuple(out)


def trace_to_json(trace: Trace) -> str:
    steps = [
        {
            "i": s.i,
            "a_new": _encode_arcs(s.a_new),
            "a_old": _encode_arcs(s.a_old),
            "m": s.m,
            "delta_a": _encode_weight(s.delta_a),
            "w_before": _encode_weight(s.w_before),
            "w_after": _encode_weight(s.w_after),
        }
        for s in trace.steps
    ]
    obj = {
        "instance_name": trace.instance_name,
        "heuristic": trace.heuristic,
        "n": trace.n,
        "steps": steps,
        "final_arcs": _encode_arcs(trace.final_arcs),
        "final_weight": _encode_weight(trace.final_weight),
        "beta_used": trace.beta_used,
    }
    return json.dumps(obj, indent=2)


def _require_fields(obj: dict, fields: tuple[str, ...], where: str) -> None:
    for f in fields:
        if f not in obj:
            raise TraceJsonError(f"missing field: {where}{f}")
    for key in obj:
        if key not in fields:
            raise TraceJsonError(f"unexpected field: {where}{key}")


def trace_from_json(text: str) -> Trace:
    """Parse trace JSON; errors name the offending field."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TraceJsonError(f"not valid JSON: {exc}") from exc
    if not isinstance(obj, dict):
        raise TraceJsonError("top level must be an object")
    _require_fields(obj, _TRACE_FIELDS, "")
    if not isinstance(obj["instance_name"], str):
        raise TraceJsonError("field instance_name must be a string")
    if not isinstance(obj["heuristic"], str):
        raise TraceJsonError("field heuristic must be a string")
    if not isinstance(obj["n"], int) or isinstance(obj["n"], bool):
        raise TraceJsonError("field n must be an integer")
    if not isinstance(obj["beta_used"], bool):
        raise TraceJsonError("field beta_used must be a boolean")
    if not isinstance(obj["steps"], list):
        raise TraceJsonError("field steps must be a list")
    steps = []
    for k, raw in enumerate(obj["steps"]):
        where = f"steps[{k}]."
        if not isinstance(raw, dict):
            raise TraceJsonError(f"field steps[{k}] must be an object")
        _require_fields(raw, _STEP_FIELDS, where)
        for int_field in ("i", "m"):
            if not isinstance(raw[int_field], int) or isinstance(raw[int_field], bool):
                raise TraceJsonError(f"field {where}{int_field} must be an integer")
        if raw["i"] < 0:
            raise TraceJsonError(f"field {where}i must be nonnegative")
        if raw["m"] < 1:
            raise TraceJsonError(f"field {where}m must be at least 1")
        steps.append(
            ConstructionStep(
                i=raw["i"],
                a_new=_decode_arcs(raw["a_new"], f"{where}a_new"),
                a_old=_decode_arcs(raw["a_old"], f"{where}a_old"),
                m=raw["m"],
                delta_a=_decode_weight(raw["delta_a"], f"{where}delta_a"),
                w_before=_decode_weight(raw["w_before"], f"{where}w_before"),
                w_after=_decode_weight(raw["w_after"], f"{where}w_after"),
            )
        )
    return Trace(
        instance_name=obj["instance_name"],
        heuristic=obj["heuristic"],
        n=obj["n"],
        steps=tuple(steps),
        final_arcs=_decode_arcs(obj["final_arcs"], "final_arcs"),
        final_weight=_decode_weight(obj["final_weight"], "final_weight"),
        beta_used=obj["beta_used"],
    )


# --- report serialization -------------------------------------------------

REPORT_CSV_COLUMNS = (
    "instance",
    "heuristic",
    "n",
    "opt",
    "final",
    "ratio",
    "pr_sum",
    "pr_holds",
    "avarc_all",
    "m_max",
    "harmonic",
    "log2n",
    "bound_log",
    "thelog_holds",
    "chain_applicable",
)


def _plain_number(x: int | float | Fraction | None) -> int | float | None:
    if x is None:
        return None
    if isinstance(x, Fraction):
        return float(x)
    return x


def report_to_json(report: BoundReport) -> str:
    obj = {
        "instance": report.instance,
        "heuristic": report.heuristic,
        "n": report.n,
        "opt": report.opt,
        "final": report.final,
        "ratio": _plain_number(report.ratio),
        "pr_sum": _plain_number(report.pr_sum),
        "pr_excluded_steps": report.pr_excluded_steps,
        "pr_holds": report.pr_holds,
        "avarc_all": report.avarc_all,
        "avarc_violations": list(report.avarc_violations),
        "m_max": report.m_max,
        "harmonic": report.harmonic,
        "log2n": report.log2n,
        "bound_harmonic": report.bound_harmonic,
        "bound_log": report.bound_log,
        "thelog_holds": report.thelog_holds,
        "chain_applicable": report.chain_applicable,
    }
    return json.dumps(obj, indent=2)


def _csv_cell(x: object) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return repr(float(x))
    if isinstance(x, float):
        return repr(x)
    return str(x)


def report_csv_header() -> str:
    return ",".join(REPORT_CSV_COLUMNS)


def report_to_csv_row(report: BoundReport) -> str:
    return ",".join(_csv_cell(getattr(report, col)) for col in REPORT_CSV_COLUMNS)
