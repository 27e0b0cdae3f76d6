"""Versioned JSON document schemas for graphs and scenarios.

Graph documents ("mpg-v1") declare nodes with taxonomy coordinates and
edges with operator specs; scenario documents ("scn-v1") reference a graph
inline or by path and add horizon, initial values, shocks, and a seed.
Parse errors carry the field context they failed in.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import (
    CycleError,
    DocumentError,
    InvalidGraphError,
    SchemaVersionError,
)
from .graph import AggregationSpec, EdgeSpec, Graph, NodeSpec, validate_graph
from .operators import (
    Delayed,
    Linear,
    Multiplicative,
    NormalNoise,
    OperatorSpec,
    Stochastic,
    Threshold,
    UniformNoise,
)
from .scenario import Scenario, ShockEntry, ShockSchedule
from .taxonomy import validate_cell
from .units import parse_unit

GRAPH_SCHEMA = "mpg-v1"
SCENARIO_SCHEMA = "scn-v1"


def _load_json(document, what: str) -> dict:
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise DocumentError(
                f"{what} parse failure at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from None
    if not isinstance(document, dict):
        raise DocumentError(f"{what} document must be a JSON object")
    return document


def operator_from_json(raw: dict, context: str) -> OperatorSpec:
    if not isinstance(raw, dict) or "kind" not in raw:
        raise DocumentError(f"{context}: operator needs a 'kind' field")
    kind = raw["kind"]
    try:
        if kind == "linear":
            return Linear(float(raw["alpha"]))
        if kind == "multiplicative":
            return Multiplicative(float(raw["beta"]))
        if kind == "threshold":
            return Threshold(
                float(raw["tau"]), float(raw["slope"]), float(raw.get("offset", 0.0))
            )
        if kind == "stochastic":
            noise_raw = raw.get("noise", {})
            noise_kind = noise_raw.get("kind")
            if noise_kind == "normal":
                noise = NormalNoise(float(noise_raw["sigma"]))
            elif noise_kind == "uniform":
                noise = UniformNoise(float(noise_raw["half_width"]))
            else:
                raise DocumentError(
                    f"{context}: noise kind must be 'normal' or 'uniform', "
                    f"got {noise_kind!r}"
                )
            return Stochastic(
                inner=operator_from_json(raw["inner"], context),
                noise=noise,
                samples=int(raw.get("samples", 1024)),
                seed=int(raw.get("seed", 0)),
            )
        if kind == "delayed":
            return Delayed(
                delta_t=int(raw["delta_t"]),
                inner=operator_from_json(raw["inner"], context),
            )
    except KeyError as exc:
        raise DocumentError(f"{context}: operator {kind!r} missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"{context}: bad operator parameter: {exc}") from None
    raise DocumentError(f"{context}: unknown operator kind {kind!r}")


def operator_to_json(op: OperatorSpec) -> dict:
    if isinstance(op, Linear):
        return {"kind": "linear", "alpha": op.alpha}
    if isinstance(op, Multiplicative):
        return {"kind": "multiplicative", "beta": op.beta}
    if isinstance(op, Threshold):
        return {"kind": "threshold", "tau": op.tau, "slope": op.slope, "offset": op.offset}
    if isinstance(op, Stochastic):
        if isinstance(op.noise, NormalNoise):
            noise = {"kind": "normal", "sigma": op.noise.sigma}
        else:
            noise = {"kind": "uniform", "half_width": op.noise.half_width}
        return {
            "kind": "stochastic",
            "noise": noise,
            "samples": op.samples,
            "seed": op.seed,
            "inner": operator_to_json(op.inner),
        }
    if isinstance(op, Delayed):
        return {"kind": "delayed", "delta_t": op.delta_t, "inner": operator_to_json(op.inner)}
    raise DocumentError(f"cannot serialize operator {op!r}")


def graph_from_document(document) -> Graph:
    """Structural parse of an mpg-v1 document (no cycle validation yet)."""
    doc = _load_json(document, "graph")
    if doc.get("schema") != GRAPH_SCHEMA:
        raise SchemaVersionError(
            f"expected schema {GRAPH_SCHEMA!r}, got {doc.get('schema')!r}"
        )
    nodes: list[NodeSpec] = []
    seen: set[str] = set()
    for raw in doc.get("nodes", []):
        try:
            node_id = str(raw["id"])
            if node_id in seen:
                raise DocumentError(f"duplicate node id {node_id!r}")
            seen.add(node_id)
            cell = validate_cell(raw["layer"], raw["domain"])
            init = raw.get("init", 0.0)
            initial = tuple(
                float(v) for v in (init if isinstance(init, list) else [init])
            )
            dim = int(raw.get("dim", len(initial)))
            if len(initial) == 1 and dim > 1:
                initial = initial * dim
            agg_raw = raw.get("aggregation")
            if agg_raw is None:
                aggregation = AggregationSpec()
            elif isinstance(agg_raw, str):
                aggregation = AggregationSpec(agg_raw)
            else:
                aggregation = AggregationSpec(
                    agg_raw.get("kind", "additive"), float(agg_raw.get("rate", 0.0))
                )
            nodes.append(
                NodeSpec(
                    id=node_id,
                    cell=cell,
                    dim=dim,
                    initial=initial,
                    unit=parse_unit(raw.get("unit", "")),
                    aggregation=aggregation,
                    metric_id=raw.get("metric_id"),
                )
            )
        except DocumentError:
            raise
        except KeyError as exc:
            raise DocumentError(f"node {raw.get('id')!r}: missing field {exc}") from None
        except (TypeError, ValueError) as exc:
            raise DocumentError(f"node {raw.get('id')!r}: {exc}") from None
    edges: list[EdgeSpec] = []
    for i, raw in enumerate(doc.get("edges", [])):
        try:
            context = f"edge #{i} {raw.get('src')!r}->{raw.get('dst')!r}"
            edges.append(
                EdgeSpec(
                    src=str(raw["src"]),
                    dst=str(raw["dst"]),
                    op=operator_from_json(raw["op"], context),
                    gain=float(raw["gain"]) if "gain" in raw and raw["gain"] is not None else None,
                )
            )
        except DocumentError:
            raise
        except KeyError as exc:
            raise DocumentError(f"edge #{i}: missing field {exc}") from None
        except (TypeError, ValueError) as exc:
            raise DocumentError(f"edge #{i}: {exc}") from None
    whitelist = tuple(int(m) for m in doc.get("allow_intra_layer_cycles", []))
    return Graph(nodes, edges, whitelist)


def parse_graph_document(document) -> Graph:
    """Parse and validate; cycle failures raise CycleError with the path."""
    graph = graph_from_document(document)
    report = validate_graph(graph)
    if not report.passed:
        if report.cycle_paths:
            raise CycleError("; ".join(report.issues))
        raise InvalidGraphError(report)
    return graph


def graph_to_document(graph: Graph) -> dict:
    nodes = []
    for node in graph.nodes:
        raw = {
            "id": node.id,
            "layer": node.cell.layer,
            "domain": node.cell.domain,
            "init": list(node.initial) if node.dim > 1 else node.initial[0],
        }
        if node.dim > 1:
            raw["dim"] = node.dim
        if node.unit.symbol:
            raw["unit"] = node.unit.symbol
        if node.aggregation != AggregationSpec():
            raw["aggregation"] = {"kind": node.aggregation.kind}
            if node.aggregation.kind == "discounted-additive":
                raw["aggregation"]["rate"] = node.aggregation.rate
        if node.metric_id:
            raw["metric_id"] = node.metric_id
        nodes.append(raw)
    edges = []
    for edge in graph.edges:
        raw = {"src": edge.src, "dst": edge.dst, "op": operator_to_json(edge.op)}
        if edge.gain is not None:
            raw["gain"] = edge.gain
        edges.append(raw)
    doc = {"schema": GRAPH_SCHEMA, "nodes": nodes, "edges": edges}
    if graph.allow_intra_layer_cycles:
        doc["allow_intra_layer_cycles"] = sorted(graph.allow_intra_layer_cycles)
    return doc


def scenario_from_document(document, base_dir: str | Path | None = None) -> Scenario:
    """Parse an scn-v1 document; `graph` may be inline or a file path
    resolved against base_dir."""
    doc = _load_json(document, "scenario")
    if doc.get("schema") != SCENARIO_SCHEMA:
        raise SchemaVersionError(
            f"expected schema {SCENARIO_SCHEMA!r}, got {doc.get('schema')!r}"
        )
    graph_field = doc.get("graph")
    if isinstance(graph_field, str):
        path = Path(graph_field)
        if base_dir is not None and not path.is_absolute():
            path = Path(base_dir) / path
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise DocumentError(f"cannot read graph document {path}: {exc}") from None
        graph = parse_graph_document(text)
    elif isinstance(graph_field, dict):
        graph = parse_graph_document(graph_field)
    else:
        raise DocumentError("scenario 'graph' must be a path or an inline document")
    try:
        horizon = int(doc["horizon"])
    except KeyError:
        raise DocumentError("scenario missing field 'horizon'") from None
    shocks = []
    for i, raw in enumerate(doc.get("shocks", [])):
        try:
            shocks.append(ShockEntry.of(int(raw["t"]), str(raw["node"]), raw["delta"]))
        except KeyError as exc:
            raise DocumentError(f"shock #{i}: missing field {exc}") from None
    initial = None
    if "init" in doc and doc["init"] is not None:
        initial = {
            str(k): tuple(float(x) for x in (v if isinstance(v, list) else [v]))
            for k, v in doc["init"].items()
        }
    return Scenario(
        graph,
        horizon,
        ShockSchedule(tuple(shocks)),
        initial=initial,
        seed=int(doc.get("seed", 0)),
    )


def scenario_to_document(scenario: Scenario, graph_path: str | None = None) -> dict:
    doc = {
        "schema": SCENARIO_SCHEMA,
        "graph": graph_path if graph_path else graph_to_document(scenario.graph),
        "horizon": scenario.horizon,
        "shocks": [
            {
                "t": e.t,
                "node": e.node,
                "delta": list(e.delta) if len(e.delta) > 1 else e.delta[0],
            }
            for e in scenario.shocks.entries
        ],
        "seed": scenario.seed,
    }
    if scenario.initial:
        doc["init"] = {
            k: (list(v) if len(v) > 1 else v[0]) for k, v in scenario.initial.items()
        }
    return doc
