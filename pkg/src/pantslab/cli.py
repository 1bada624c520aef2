"""Command-line front end.

Every artifact starts with a provenance block: the full parsed config and
the package version.  JSON output wraps the result as
``{"provenance": ..., "result": ...}``; CSV output puts the provenance on
``#`` comment lines above the header.

Exit codes: 0 ok, 2 invariant violation, 3 cap exceeded, 4 input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

from . import __version__, bounds, experiments, families
from .canonical import canonicalize, enumerate_classes
from .errors import (CapExceededError, DomainError, InvalidGraphError, InvariantError,
                     MalformedMoveError, PantsLabError, ReplayError)
from .metric_oracle import DistanceQuery, diameter, distance
from .moves import MoveSchedule
from .pants_graph import PantsGraph, metrics, validate
from .reduction import to_linear, to_treelike

EXIT_OK, EXIT_INVARIANT, EXIT_CAP, EXIT_INPUT = 0, 2, 3, 4

FAMILIES = {
    "tripod": lambda a: families.tripod(),
    "one-holed-torus": lambda a: families.one_holed_torus(),
    "theta": lambda a: families.theta(),
    "dumbbell": lambda a: families.dumbbell(),
    "linear": lambda a: families.linear_tree(a.n),
    "claw": lambda a: families.claw_tree(),
    "treelike": lambda a: families.treelike(a.g, a.n),
    "random-tree": lambda a: families.random_tree(a.n, a.seed),
    "random-cubic": lambda a: families.random_cubic(a.g, a.seed, a.n),
    "random-treelike": lambda a: families.random_treelike(a.g, a.n, a.seed),
}


class InputError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return str(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def provenance(args: argparse.Namespace) -> dict:
    config = {k: v for k, v in vars(args).items() if k != "func"}
    return {"program": "pantslab", "version": __version__, "config": _jsonable(config)}


def emit_json(args, result) -> None:
    text = json.dumps({"provenance": provenance(args), "result": _jsonable(result)}, indent=2)
    _write(args, text + "\n")


def emit_csv(args, columns: list[str], rows: list[dict]) -> None:
    buf = io.StringIO()
    buf.write("# " + json.dumps(provenance(args), sort_keys=True) + "\n")
    writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore", lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    _write(args, buf.getvalue())


def _write(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _read_json(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not JSON: {exc}") from exc
    if isinstance(data, dict) and "result" in data and "provenance" in data:
        data = data["result"]
    return data


def load_graph(args, path: str | None = None, family: str | None = None) -> PantsGraph:
    if path:
        data = _read_json(path)
        if isinstance(data, dict) and "graph" in data:
            data = data["graph"]
        try:
            return PantsGraph.from_dict(data)
        except (InvalidGraphError, ValueError, TypeError) as exc:
            raise InputError(f"{path}: {exc}") from exc
    if family:
        return FAMILIES[family](args)
    raise InputError("give a graph file or --family")


# -- subcommands -----------------------------------------------------------------

def cmd_validate(args) -> int:
    graph = load_graph(args, args.graph, args.family)
    rep = validate(graph)
    emit_json(args, {"ok": rep.ok, "genus": rep.genus, "punctures": rep.punctures,
                     "issues": list(rep.issues)})
    return EXIT_OK if rep.ok else EXIT_INVARIANT


def cmd_metrics(args) -> int:
    graph = load_graph(args, args.graph, args.family)
    if args.format == "dot":
        _write(args, graph.to_dot() + "\n")
        return EXIT_OK
    m = metrics(graph)
    emit_json(args, {"genus": m.genus, "punctures": m.punctures, "girth": m.girth,
                     "cycle_rank": m.cycle_rank, "leaf_count": m.leaf_count,
                     "canonical_key": str(canonicalize(graph)), "graph": graph.to_dict()})
    return EXIT_OK


def cmd_distance(args) -> int:
    a = load_graph(args, args.source)
    b = load_graph(args, args.target)
    res = distance(DistanceQuery(a, b, args.metric, args.quotient, args.disjoint,
                                 cap_nodes=args.cap_nodes))
    res.schedule.verify()
    emit_json(args, {"distance": res.distance, "explored_nodes": res.explored_nodes,
                     "complete": res.complete, "schedule": res.schedule.to_dict()})
    return EXIT_OK


def cmd_diameter(args) -> int:
    rep = diameter(args.g, args.n, args.metric, args.quotient, args.disjoint,
                   args.cap_classes, workers=args.workers)
    emit_json(args, rep.to_dict())
    return EXIT_OK


def cmd_enumerate(args) -> int:
    classes = enumerate_classes(args.g, args.n, args.cap_classes)
    rows = [{"index": i, "key": str(k), "graph": json.dumps(g.to_dict(), separators=(",", ":"))}
            for i, (k, g) in enumerate(sorted(classes.items()))]
    if args.format == "csv":
        emit_csv(args, ["index", "key", "graph"], rows)
    else:
        emit_json(args, {"genus": args.g, "punctures": args.n, "count": len(rows),
                         "classes": [{"key": r["key"], "graph": classes[k].to_dict()}
                                     for r, k in zip(rows, sorted(classes))]})
    return EXIT_OK


def cmd_reduce(args) -> int:
    graph = load_graph(args, args.graph, args.family)
    trace = None
    if args.target == "linear":
        schedule = to_linear(graph)
    else:
        schedule, trace = to_treelike(graph)
    schedule.verify()
    result = {"target": args.target, "total_cost": schedule.total_cost,
              "unit_moves": schedule.unit_moves, "schedule": schedule.to_dict()}
    if args.trace and trace is not None:
        result["trace"] = trace.rows()
        result["effective_genus"] = trace.effective_genus
        result["cycle_counts"] = trace.cycle_counts
    emit_json(args, result)
    return EXIT_OK


def cmd_replay(args) -> int:
    data = _read_json(args.schedule)
    if isinstance(data, dict) and "schedule" in data:
        data = data["schedule"]
    try:
        schedule = MoveSchedule.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{args.schedule}: malformed schedule: {exc!r}") from exc
    schedule.verify()
    emit_json(args, {"replayed": True, "total_cost": schedule.total_cost,
                     "unit_moves": schedule.unit_moves, "batches": len(schedule.batches)})
    return EXIT_OK


def _parse_value(text: str):
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            pass
    if text.lower() in ("true", "false"):
        return text.lower() == "true"
    return text


def _params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise InputError(f"--param wants key=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k] = _parse_value(v)
    return out


def cmd_bounds(args) -> int:
    params = _params(args.param)
    for k in ("L", "eps"):
        if getattr(args, k, None) is not None:
            params[k] = getattr(args, k)
    try:
        if args.name == "sweep":
            return _bounds_sweep(args, params)
        report = bounds.evaluate(args.name, **params)
    except (KeyError, TypeError) as exc:
        raise InputError(str(exc)) from exc
    emit_json(args, report.to_dict())
    return EXIT_INVARIANT if report.satisfied is False else EXIT_OK


def _bounds_sweep(args, params: dict) -> int:
    if not args.bound or not args.grid:
        raise InputError("bounds sweep needs --bound NAME and --grid key=v1,v2,...")
    key, _, values = args.grid.partition("=")
    rows, extra_cols = [], []
    for v in values.split(","):
        report = bounds.evaluate(args.bound, **{**params, key: _parse_value(v)})
        flat = {k: x for k, x in report.details.items() if isinstance(x, (int, float, bool))}
        extra_cols = extra_cols or list(flat)
        rows.append({key: report.inputs[key], "value": report.value,
                     "satisfied": report.satisfied, **flat})
    emit_csv(args, [key, "value", "satisfied", *extra_cols], rows)
    return EXIT_OK


def cmd_sweep(args) -> int:
    _, columns = experiments.RUNS[args.kind]
    rows = experiments.sweep(args.kind, args.sizes, args.seeds, args.seed, args.workers)
    emit_csv(args, columns, rows)
    return EXIT_OK


# -- parser ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--g", type=int, default=0, help="genus")
    common.add_argument("--n", type=int, default=0, help="punctures")
    common.add_argument("--metric", choices=["pants", "cubical"], default="cubical")
    common.add_argument("--quotient", action=argparse.BooleanOptionalAction, default=True,
                        help="work up to graph isomorphism (default)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap-classes", type=int, default=None,
                        help="class enumeration cap (env PANTSLAB_CAP_CLASSES)")
    common.add_argument("--disjoint", choices=["vertex", "edge"], default="vertex")
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    common.add_argument("--out", default=None, help="write here instead of stdout")
    common.add_argument("--format", choices=["json", "csv", "dot"], default="json")

    ap = argparse.ArgumentParser(prog="pantslab", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--version", action="version", version=f"pantslab {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def graph_source(p, positional="graph"):
        p.add_argument(positional, nargs="?", help="graph JSON file")
        p.add_argument("--family", choices=sorted(FAMILIES), help="built-in graph instead of a file")

    p = sub.add_parser("validate", parents=[common], help="check a graph's structural invariants")
    graph_source(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("metrics", parents=[common], help="genus, punctures, girth, canonical key")
    graph_source(p)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("distance", parents=[common], help="exact distance between two graphs")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--cap-nodes", type=int, default=None)
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("diameter", parents=[common], help="exact quotient diameter at (g, n)")
    p.set_defaults(func=cmd_diameter)

    p = sub.add_parser("enumerate", parents=[common], help="isomorphism classes at (g, n)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("reduce", parents=[common], help="schedule to the linear or treelike graph")
    graph_source(p)
    p.add_argument("--target", choices=["linear", "treelike"], required=True)
    p.add_argument("--trace", action="store_true", help="include per-phase costs")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("replay", parents=[common], help="replay and verify a schedule file")
    p.add_argument("schedule")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("bounds", parents=[common], help="evaluate a bound, or sweep one over a grid")
    p.add_argument("name", help=f"one of {sorted(bounds.REPORTS)} or 'sweep'")
    p.add_argument("--param", action="append", metavar="K=V")
    p.add_argument("--L", type=float, default=None)
    p.add_argument("--eps", type=float, default=None)
    p.add_argument("--bound", help="bound to sweep")
    p.add_argument("--grid", help="K=V1,V2,... for sweep")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("sweep", parents=[common], help="seeded reduction sweeps as CSV")
    p.add_argument("kind", choices=sorted(experiments.RUNS))
    p.add_argument("--sizes", type=int, nargs="+", required=True)
    p.add_argument("--seeds", type=int, default=10)
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapExceededError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InvariantError, ReplayError, MalformedMoveError) as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (InputError, InvalidGraphError, DomainError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PantsLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
