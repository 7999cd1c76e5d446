"""Command line front end: simplify, graph, oracle and render."""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Dict, List, Optional, Sequence, Tuple

import jsonschema

from .geometry import DEFAULT_TOLERANCE, Containment, set_tolerance
from .model import (MODELS, Disk, Indecisive, Polygon, Segment, UncertainCurve, curve, disk,
                    indecisive, polygon, segment, validate)
from .fixed import METRICS

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2, 3
TOLERANCE_ENV = "UNCSIMP_TOLERANCE"

_PT = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_POINT_SCHEMAS = {
    "disk": {"type": "object", "required": ["c", "r"],
             "properties": {"c": _PT, "r": {"type": "number"}}},
    "indecisive": {"type": "object", "required": ["options"],
                   "properties": {"options": {"type": "array", "items": _PT}}},
    "segment": {"type": "object", "required": ["a", "b"],
                "properties": {"a": _PT, "b": _PT}},
    "polygon": {"type": "object", "required": ["vertices"],
                "properties": {"vertices": {"type": "array", "items": _PT}}},
}
DOCUMENT_SCHEMA = {
    "type": "object",
    "required": ["model", "epsilon", "metric", "points"],
    "properties": {
        "model": {"enum": list(MODELS)},
        "epsilon": {"type": "number", "exclusiveMinimum": 0},
        "metric": {"enum": list(METRICS)},
        "points": {"type": "array", "minItems": 1},
        "tolerance": {"type": "number", "exclusiveMinimum": 0},
    },
}


class InputError(Exception):
    """Malformed input; carries the JSON pointer of the offending value."""

    def __init__(self, pointer: str, message: str, code: int = EXIT_USAGE):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
        self.code = code


class UsageError(Exception):
    pass


class InvariantBreach(Exception):
    pass


def _pointer(path: Sequence[Any]) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def _schema_check(doc: Any, schema: dict, prefix: Sequence[Any] = ()) -> None:
    errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(doc),
                    key=lambda e: (list(map(str, e.absolute_path)), e.validator))
    if not errors:
        return
    e = errors[0]
    path = list(prefix) + list(e.absolute_path)
    if e.validator == "required" and isinstance(e.instance, dict):
        missing = [k for k in e.validator_value if k not in e.instance]
        if missing:
            path.append(missing[0])
            raise InputError(_pointer(path), "missing required field")
    raise InputError(_pointer(path), e.message)


def _region(model: str, p: dict):
    if model == "disk":
        return disk(p["c"], p["r"])
    if model == "indecisive":
        return indecisive(p["options"])
    if model == "segment":
        return segment(p["a"], p["b"])
    return polygon(p["vertices"])


def parse_document(doc: Any) -> Tuple[UncertainCurve, float, str, Optional[float]]:
    """Curve, epsilon, metric and optional tolerance from a decoded document."""
    _schema_check(doc, DOCUMENT_SCHEMA)
    model = doc["model"]
    item = _POINT_SCHEMAS[model]
    regions = []
    for k, p in enumerate(doc["points"]):
        _schema_check(p, item, ("points", k))
        regions.append(_region(model, p))
    c = curve(regions, model)
    diag = validate(c)
    if diag is not None:
        where = "" if diag.index is None else f"/points/{diag.index}"
        raise InputError(where, diag.reason, EXIT_INVALID)
    return c, float(doc["epsilon"]), doc["metric"], doc.get("tolerance")


def parse_input(data: bytes, overrides: Optional[Dict[str, Any]] = None
                ) -> Tuple[UncertainCurve, float, str, Optional[float]]:
    """Parse a UTF-8 JSON document; ``overrides`` replace top-level fields."""
    try:
        doc = json.loads(data.decode("utf-8") if isinstance(data, bytes) else data)
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise InputError("", f"not valid UTF-8 JSON ({exc})")
    if isinstance(doc, dict) and overrides:
        doc = {**doc, **{k: v for k, v in overrides.items() if v is not None}}
    return parse_document(doc)


def _xy(p) -> List[float]:
    return [p[0], p[1]]


def region_to_doc(u) -> dict:
    if isinstance(u, Disk):
        return {"c": _xy(u.center), "r": u.radius}
    if isinstance(u, Indecisive):
        return {"options": [_xy(p) for p in u.options]}
    if isinstance(u, Segment):
        return {"a": _xy(u.a), "b": _xy(u.b)}
    return {"vertices": [_xy(p) for p in u.corners]}


def curve_to_doc(c: UncertainCurve, epsilon: float, metric: str,
                 tolerance: Optional[float] = None) -> dict:
    doc = {"model": c.model, "epsilon": epsilon, "metric": metric,
           "points": [region_to_doc(u) for u in c.points]}
    if tolerance is not None:
        doc["tolerance"] = tolerance
    return doc


def resolve_tolerance(flag: Optional[float], document: Optional[float],
                      env: Optional[str] = None) -> float:
    """Flag, then environment, then document, then the default."""
    if flag is not None:
        return flag
    if env is None:
        env = os.environ.get(TOLERANCE_ENV)
    if env:
        try:
            tau = float(env)
        except ValueError:
            raise UsageError(f"{TOLERANCE_ENV} is not a number: {env!r}")
        if not tau > 0:
            raise UsageError(f"{TOLERANCE_ENV} must be positive")
        return tau
    if document is not None:
        return float(document)
    return DEFAULT_TOLERANCE


# --- subcommands ------------------------------------------------------------

def cmd_simplify(c: UncertainCurve, eps: float, metric: str, args) -> List[dict]:
    from .simplifier import build_graph, shortest_path
    if len(c) == 1:
        return [{"indices": [1], "links": 0, "edges_tested": 0, "valid_edges": 0}]
    g = build_graph(c, eps, metric, args.jobs)
    res = shortest_path(g, eps, metric)
    for a, b in zip(res.indices, res.indices[1:]):
        if not g.has_edge(a - 1, b - 1):
            raise InvariantBreach(f"path link ({a}, {b}) is not a graph edge")
    return [{"indices": res.indices, "links": res.link_count,
             "edges_tested": res.edges_tested, "valid_edges": res.valid_edges}]


def cmd_graph(c: UncertainCurve, eps: float, metric: str, args) -> List[dict]:
    from .simplifier import build_graph
    if len(c) == 1:
        return [{"n": 1, "adjacency": [[]], "edges": 0}]
    g = build_graph(c, eps, metric, args.jobs)
    return [{"n": g.n, "adjacency": [[j + 1 for j in adj] for adj in g.adjacency],
             "edges": g.edge_count}]


def cmd_oracle(c: UncertainCurve, eps: float, metric: str, args) -> List[dict]:
    from .geometry import get_tolerance
    from .oracle import TWILIGHT, exact_shortcut_oracle, hausdorff_batch, sampled_shortcut_oracle
    from .shortcut import shortcut_valid
    n = len(c)
    if args.pair:
        i, j = args.pair[0] - 1, args.pair[1] - 1
        if not 0 <= i < j < n:
            raise UsageError(f"--pair must satisfy 1 <= I < J <= {n}")
        pairs = [(i, j)]
    else:
        pairs = [(i, j) for i in range(n) for j in range(i + 2, n)]
    out, breach = [], []
    tau = get_tolerance()
    for i, j in pairs:
        fast = shortcut_valid(c, i, j, eps, metric)
        if c.model == "indecisive":
            res = exact_shortcut_oracle(c, i, j, eps, metric)
        else:
            res = sampled_shortcut_oracle(c, i, j, eps, metric, args.samples, args.seed)
        dist = res.distance
        if res.violation is not None and dist is None and metric == "hausdorff":
            import numpy as np
            dist = float(hausdorff_batch(np.array([res.violation]))[0])
        twilight = dist is not None and abs(dist - eps) < TWILIGHT * tau
        if res.exact:
            agree = fast == res.ok
        else:
            agree = res.ok or not fast
        rec = {"i": i + 1, "j": j + 1, "epsilon": eps, "metric": metric, "fast": fast,
               "oracle": res.ok, "mode": "exact" if res.exact else "sampled",
               "checked": res.checked, "agree": agree, "twilight": twilight}
        if res.violation is not None:
            rec["violation"] = [list(p) for p in res.violation]
            rec["distance"] = dist
        if not agree and not twilight:
            breach.append((i + 1, j + 1))
        out.append(rec)
    if breach:
        args._breach = f"oracle disagrees with the fast check on {breach[:5]}"
    return out


def _svg_region(u) -> str:
    if isinstance(u, Disk):
        (x, y), r = u.center, u.radius
        if r == 0:
            return f'<path class="region" d="M {x} {y} h 0" />'
        return (f'<path class="region" d="M {x - r} {y} a {r} {r} 0 1 0 {2 * r} 0 '
                f'a {r} {r} 0 1 0 {-2 * r} 0 Z" />')
    if isinstance(u, Indecisive):
        d = " ".join(f"M {p[0]} {p[1]} h 0" for p in u.options)
        return f'<path class="region" d="{d}" />'
    vs = u.vertices()
    d = "M " + " L ".join(f"{p[0]} {p[1]}" for p in vs) + (" Z" if len(vs) > 2 else "")
    return f'<path class="region" d="{d}" />'


def render_svg(c: UncertainCurve, indices: Sequence[int], eps: float) -> str:
    """Static SVG: one path per region, tangent lines of each link, the simplification."""
    from .regions import build_strip, nesting
    pts = [p for u in c.points for p in u.vertices()]
    pad = max((u.radius for u in c.points if isinstance(u, Disk)), default=0.0) + eps
    x0 = min(p[0] for p in pts) - pad
    y0 = min(p[1] for p in pts) - pad
    w = max(p[0] for p in pts) + pad - x0
    h = max(p[1] for p in pts) + pad - y0
    sw = max(w, h) / 400 or 1.0
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{x0} {y0} {w} {h}">',
             f'<g transform="translate(0 {2 * y0 + h}) scale(1 -1)" fill="none" '
             f'stroke-width="{sw}">',
             '<g stroke="#4878a8" fill="#4878a8" fill-opacity="0.2" stroke-linecap="round">']
    lines += [_svg_region(u) for u in c.points]
    lines.append('</g><g stroke="#999" stroke-dasharray="4 2">')
    for a, b in zip(indices, indices[1:]):
        if b - a < 2:
            continue
        u1, un = c.points[a - 1], c.points[b - 1]
        try:
            if isinstance(u1, Polygon) and nesting(list(u1.corners), list(un.corners)) is not None:
                continue
            strip = build_strip(u1, un)
        except ValueError:
            continue
        if isinstance(strip, Containment) or not hasattr(strip, "tangent_1"):
            continue
        for (p, q) in (strip.tangent_1, strip.tangent_2):
            lines.append(f'<line class="tangent" x1="{p[0]}" y1="{p[1]}" x2="{q[0]}" y2="{q[1]}" />')
    lines.append("</g>")
    anchor = [_anchor(c.points[k - 1]) for k in indices]
    lines.append('<polyline class="simplification" stroke="#c03030" points="'
                 + " ".join(f"{p[0]},{p[1]}" for p in anchor) + '" />')
    lines.append("</g></svg>")
    return "\n".join(lines) + "\n"


def _anchor(u):
    if isinstance(u, Disk):
        return u.center
    vs = u.vertices()
    return (sum(p[0] for p in vs) / len(vs), sum(p[1] for p in vs) / len(vs))


def cmd_render(c: UncertainCurve, eps: float, metric: str, args) -> List[dict]:
    out = args.out
    if out is None:
        raise UsageError("render needs --out PATH")
    if args.output not in (None, "stdout") and os.path.abspath(args.output) == os.path.abspath(out):
        raise UsageError("--out and --output must differ")
    res = cmd_simplify(c, eps, metric, args)[0]
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(render_svg(c, res["indices"], eps))
    return [{"svg": out, **res}]


COMMANDS = {"simplify": cmd_simplify, "graph": cmd_graph, "oracle": cmd_oracle,
            "render": cmd_render}


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--input", required=True, metavar="PATH",
                        help="JSON document, or - for stdin")
    common.add_argument("--epsilon", type=float, help="overrides the document")
    common.add_argument("--metric", choices=METRICS, help="overrides the document")
    common.add_argument("--output", default="stdout", metavar="PATH|stdout",
                        help="where JSON lines go (default stdout)")
    common.add_argument("--jobs", type=int, default=1, metavar="N",
                        help="worker processes for the shortcut graph")
    common.add_argument("--tolerance", type=float, metavar="X",
                        help=f"geometric tolerance; beats ${TOLERANCE_ENV} and the document")
    p = _Parser(prog="uncsimp", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("simplify", parents=[common], help="minimum-link simplification")
    sub.add_parser("graph", parents=[common], help="dump the shortcut graph")
    o = sub.add_parser("oracle", parents=[common], help="compare fast checks with the oracle")
    o.add_argument("--seed", type=int, default=0, help="sampling seed")
    o.add_argument("--samples", type=int, default=1000,
                   help="random realisations per pair")
    o.add_argument("--pair", type=int, nargs=2, metavar=("I", "J"),
                   help="check one shortcut (1-based) instead of all")
    r = sub.add_parser("render", parents=[common], help="write an SVG picture")
    r.add_argument("--out", metavar="PATH", help="SVG file to write (required)")
    return p


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        if getattr(args, "samples", 1) < 1:
            raise UsageError("--samples must be at least 1")
        if args.tolerance is not None and not args.tolerance > 0:
            raise UsageError("--tolerance must be positive")
        if args.epsilon is not None and not args.epsilon > 0:
            raise UsageError("--epsilon must be positive")
        try:
            data = _read(args.input)
        except OSError as exc:
            raise UsageError(f"cannot read {args.input}: {exc.strerror}")
        c, eps, metric, doc_tau = parse_input(
            data, {"epsilon": args.epsilon, "metric": args.metric})
        set_tolerance(resolve_tolerance(args.tolerance, doc_tau))
        records = COMMANDS[args.command](c, eps, metric, args)
        breach = getattr(args, "_breach", None)
        text = "\n".join(json.dumps(r) for r in records) + "\n"
        if args.output in (None, "stdout"):
            stdout.write(text)
        else:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        if breach:
            raise InvariantBreach(breach)
        return EXIT_OK
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    except UsageError as exc:
        stderr.write(f"uncsimp: usage error: {exc}\n")
        return EXIT_USAGE
    except InputError as exc:
        kind = "invalid input" if exc.code == EXIT_INVALID else "parse error"
        stderr.write(f"uncsimp: {kind} at {exc}\n")
        return exc.code
    except InvariantBreach as exc:
        stderr.write(f"uncsimp: internal invariant breached: {exc}\n")
        return EXIT_INTERNAL
    except Exception as exc:  # anything unexpected is our bug, not the user's
        stderr.write(f"uncsimp: internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL
    finally:
        set_tolerance(DEFAULT_TOLERANCE)


def main() -> None:
    sys.exit(run())
