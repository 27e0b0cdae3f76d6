"""Command-line surface.

Subcommands: validate, eval, topo, propagate, analyze, compose, case-study.
Exit codes: 0 success, 1 validation failure (cycles, dimension errors, hard
range violations), 2 I/O or parse failure.  The MPGLAB_SEED environment
variable overrides document seeds, and identical inputs plus identical
seeds produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

from .analysis import (
    amplification_factor,
    compose_path,
    find_bottlenecks,
    find_leverage_points,
    spectral_radius,
    stability_classification,
    synthesize_composite_metric,
)
from .builtin import builtin_catalog
from .catalog import Verdict, check_range, evaluate
from .documents import (
    graph_from_document,
    parse_graph_document,
    scenario_from_document,
)
from .errors import DocumentError, MpglabError
from .graph import linearize, validate_graph
from .scenario import Trajectory, build_case_study, run, summarize
from .topology import (
    balanced_bisection_bandwidth,
    interconnect_bisection_bandwidth,
    network_diameter,
    oversubscription_ratio,
    parse_topology_document,
)
from .units import parse_quantity

SEED_ENV = "MPGLAB_SEED"


def _fmt(value: float) -> str:
    """Shortest representation capped at 12 significant digits."""
    return f"{float(value):.12g}"


def emit_trajectory_csv(trajectory: Trajectory) -> str:
    """CSV of accumulated node values: header "t,<node ids...>", one row per
    recorded step, LF line endings."""
    graph = trajectory.scenario.graph
    columns: list[str] = []
    for node in graph.nodes:
        if node.dim == 1:
            columns.append(node.id)
        else:
            columns.extend(f"{node.id}[{j}]" for j in range(node.dim))
    lines = ["t," + ",".join(columns)]
    for state in trajectory.states:
        row = [str(state.t)]
        for node in graph.nodes:
            row.extend(_fmt(v) for v in state.levels[node.id])
        lines.append(",".join(row))
    return "\n".join(lines) + "\n"


def _read_file(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from None


def _seed_override(scenario):
    seed_text = os.environ.get(SEED_ENV)
    if seed_text is None:
        return scenario
    try:
        return replace(scenario, seed=int(seed_text))
    except ValueError:
        raise DocumentError(f"{SEED_ENV} must be an integer, got {seed_text!r}") from None


def _print_matrix(W, out) -> None:
    width = max(len(label) for label in W.labels) if W.labels else 1
    header = " ".join(f"{label:>{max(width, 10)}}" for label in W.labels)
    print(f"{'':>{width}} {header}", file=out)
    for i, label in enumerate(W.labels):
        row = " ".join(f"{_fmt(v):>{max(width, 10)}}" for v in W.matrix[i])
        print(f"{label:>{width}} {row}", file=out)


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_validate(args, out) -> int:
    graph = graph_from_document(_read_file(args.graph))
    report = validate_graph(graph)
    for line in report.lines():
        print(line, file=out)
    return 0 if report.passed else 1


def _cmd_eval(args, out) -> int:
    catalog = builtin_catalog()
    bindings = {}
    for text in args.bind or []:
        if "=" not in text:
            raise DocumentError(f"--bind expects name=value, got {text!r}")
        name, raw = text.split("=", 1)
        if name in bindings:
            raise DocumentError(f"duplicate binding for {name!r}")
        bindings[name] = parse_quantity(raw)
    result = evaluate(catalog, args.metric_id, bindings)
    entry = catalog.get(args.metric_id)
    unit = f" {entry.unit.symbol}" if entry.unit.symbol else ""
    print(f"{args.metric_id.upper()} = {_fmt(result.value)}{unit}", file=out)
    verdict = check_range(catalog, args.metric_id, result)
    if verdict is Verdict.SOFT_WARNING:
        print(f"warning: {args.metric_id} = {_fmt(result.value)} is outside its "
              f"customary range (soft bound)", file=out)
    elif verdict is Verdict.HARD_VIOLATION:
        print(f"violation: {args.metric_id} = {_fmt(result.value)} breaks a hard "
              f"range bound", file=out)
        return 1
    return 0


def _cmd_topo(args, out) -> int:
    topo = parse_topology_document(_read_file(args.topology))
    if args.metric == "diameter":
        print(f"diameter = {network_diameter(topo)} hops", file=out)
    elif args.metric == "ibb":
        value = interconnect_bisection_bandwidth(topo)
        print(f"ibb = {_fmt(value.value)} {value.unit}".rstrip(), file=out)
    elif args.metric == "bbb":
        value = balanced_bisection_bandwidth(topo)
        print(f"bbb = {_fmt(value.value)} {value.unit}".rstrip(), file=out)
    else:
        print(f"osr = {_fmt(oversubscription_ratio(topo))}", file=out)
    return 0


def _cmd_propagate(args, out) -> int:
    scenario = scenario_from_document(
        _read_file(args.scenario), base_dir=Path(args.scenario).parent
    )
    scenario = _seed_override(scenario)
    trajectory = run(scenario)
    summary = summarize(trajectory)
    for line in summary.lines():
        print(line, file=out)
    if args.csv:
        Path(args.csv).write_text(emit_trajectory_csv(trajectory), encoding="utf-8")
        print(f"wrote {args.csv}", file=out)
    return 0


def _cmd_analyze(args, out) -> int:
    graph = parse_graph_document(_read_file(args.graph))
    if args.stability:
        result = stability_classification(graph)
        print(f"rho = {_fmt(result.rho)}", file=out)
        print(f"classification = {result.classification}", file=out)
    elif args.bottlenecks:
        print("weighted in-degree (descending):", file=out)
        for score in find_bottlenecks(graph):
            print(f"  {score.node_id}: {_fmt(score.score)}", file=out)
    else:
        print("weighted out-degree (descending) with downstream influence:", file=out)
        for score in find_leverage_points(graph):
            print(
                f"  {score.node_id}: {_fmt(score.score)} "
                f"(influence {_fmt(score.influence)})",
                file=out,
            )
    return 0


def _cmd_compose(args, out) -> int:
    graph = parse_graph_document(_read_file(args.graph))
    metric, coefficient = synthesize_composite_metric(graph, args.src, args.dst)
    print(f"coefficient = {_fmt(coefficient)}", file=out)
    print(f"metric = {metric.name}", file=out)
    if metric.unit.symbol:
        print(f"unit = {metric.unit.symbol}", file=out)
    print(metric.note, file=out)
    return 0


def _cmd_case_study(args, out) -> int:
    graph, scenario = build_case_study()
    scenario = _seed_override(scenario)
    W = linearize(graph)
    print("propagation matrix:", file=out)
    _print_matrix(W, out)
    spectral = spectral_radius(W)
    print(f"rho = {_fmt(spectral.rho)}", file=out)
    print(f"classification = {stability_classification(graph).classification}", file=out)
    path = [n.id for n in graph.nodes]
    gamma = amplification_factor(graph, path)
    print(f"composite coefficient {path[0]} -> {path[-1]} = {_fmt(gamma.gamma)}",
          file=out)
    trajectory = run(scenario)
    print("trajectory (accumulated values):", file=out)
    csv_text = emit_trajectory_csv(trajectory)
    print(csv_text, end="", file=out)
    if args.csv:
        Path(args.csv).write_text(csv_text, encoding="utf-8")
        print(f"wrote {args.csv}", file=out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mpglab",
        description="Metric propagation graphs and the AI-infrastructure "
                    "metric catalog: validate documents, evaluate metrics, "
                    "analyze topologies, and run what-if scenarios.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a graph document")
    p.add_argument("graph")
    p.set_defaults(handler=_cmd_validate)

    p = sub.add_parser("eval", help="evaluate a catalog metric over bindings")
    p.add_argument("metric_id")
    p.add_argument("--bind", action="append", metavar="NAME=VALUE[UNIT]",
                   help="e.g. --bind E_total=1.56MWh")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("topo", help="topology-derived metrics")
    p.add_argument("topology")
    p.add_argument("--metric", required=True,
                   choices=["diameter", "ibb", "bbb", "osr"])
    p.set_defaults(handler=_cmd_topo)

    p = sub.add_parser("propagate", help="run a scenario document")
    p.add_argument("scenario")
    p.add_argument("--csv", help="write the trajectory to this CSV file")
    p.set_defaults(handler=_cmd_propagate)

    p = sub.add_parser("analyze", help="graph analyses")
    p.add_argument("graph")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--bottlenecks", action="store_true")
    group.add_argument("--leverage", action="store_true")
    group.add_argument("--stability", action="store_true")
    p.set_defaults(handler=_cmd_analyze)

    p = sub.add_parser("compose", help="synthesize a composite metric")
    p.add_argument("graph")
    p.add_argument("--from", dest="src", required=True)
    p.add_argument("--to", dest="dst", required=True)
    p.set_defaults(handler=_cmd_compose)

    p = sub.add_parser("case-study", help="run the bundled case study")
    p.add_argument("--csv", help="write the trajectory to this CSV file")
    p.set_defaults(handler=_cmd_case_study)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = out if out is not None else sys.stdout
    try:
        return args.handler(args, out)
    except DocumentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MpglabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
