"""Metric propagation graphs: nodes in taxonomy cells, operator edges,
the simultaneous state update, and linearization to the sensitivity matrix.

State model
-----------
Each node carries two coupled series.  ``State.values`` holds the
*propagating deviation* at step t: the quantity edges read and transform.
``State.levels`` holds the accumulated node value, updated through the
node's aggregation.  For the default additive aggregation the step map on
deviations of a purely linear graph is exactly ``W @ M + B``, while levels
integrate the arriving deviations, so an impulse shock leaves a persistent
level response (the usual way sensitivity chains are read).

Cycles across layers are rejected; cycles confined to one layer pass
validation only when that layer is whitelisted in the graph document.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import (
    GraphError,
    InvalidGraphError,
    NumericOverflowError,
    StateError,
    UnknownNodeError,
)
from .operators import (
    OperatorSpec,
    apply_operator,
    default_gain,
    operator_delay,
    operator_derivative,
)
from .taxonomy import Cell
from .units import Unit

AGGREGATION_KINDS = ("additive", "multiplicative", "min", "discounted-additive")


@dataclass(frozen=True)
class AggregationSpec:
    """How a node folds the sum of inbound contributions into its level."""

    kind: str = "additive"
    rate: float = 0.0  # discounted-additive only

    def __post_init__(self) -> None:
        if self.kind not in AGGREGATION_KINDS:
            raise GraphError(f"unknown aggregation kind {self.kind!r}")
        if self.kind == "discounted-additive" and self.rate <= -1.0:
            raise GraphError(f"discount rate must exceed -1, got {self.rate}")


ADDITIVE = AggregationSpec("additive")


@dataclass(frozen=True)
class NodeSpec:
    id: str
    cell: Cell
    dim: int = 1
    initial: tuple[float, ...] = (0.0,)
    unit: Unit = Unit()
    aggregation: AggregationSpec = ADDITIVE
    metric_id: str | None = None

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise GraphError(f"node {self.id!r}: dim must be >= 1")
        if len(self.initial) != self.dim:
            raise GraphError(
                f"node {self.id!r}: initial value length {len(self.initial)} "
                f"does not match dim {self.dim}"
            )

    def initial_array(self) -> np.ndarray:
        return np.asarray(self.initial, dtype=float)


@dataclass(frozen=True)
class EdgeSpec:
    src: str
    dst: str
    op: OperatorSpec
    gain: float | None = None  # document override; None = local sensitivity default


@dataclass
class GraphValidationReport:
    issues: list[str] = field(default_factory=list)
    cycle_paths: list[list[str]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.issues

    def lines(self) -> list[str]:
        return ["ok"] if self.passed else list(self.issues)


class Graph:
    """Directed multigraph over NodeSpecs; immutable after construction."""

    def __init__(
        self,
        nodes: list[NodeSpec] | tuple[NodeSpec, ...],
        edges: list[EdgeSpec] | tuple[EdgeSpec, ...] = (),
        allow_intra_layer_cycles: tuple[int, ...] = (),
    ):
        self.nodes = tuple(nodes)
        self.edges = tuple(edges)
        self.allow_intra_layer_cycles = frozenset(int(m) for m in allow_intra_layer_cycles)
        self.node_map: dict[str, NodeSpec] = {}
        for node in self.nodes:
            if node.id in self.node_map:
                raise GraphError(f"duplicate node id {node.id!r}")
            self.node_map[node.id] = node
        self._inbound: dict[str, list[int]] = {n.id: [] for n in self.nodes}
        self._outbound: dict[str, list[int]] = {n.id: [] for n in self.nodes}
        for idx, edge in enumerate(self.edges):
            if edge.src in self._outbound and edge.dst in self._inbound and edge.src != edge.dst:
                self._outbound[edge.src].append(idx)
                self._inbound[edge.dst].append(idx)
        self._report: GraphValidationReport | None = None
        self._gains: tuple[float, ...] | None = None

    # -- structure helpers -------------------------------------------------

    def node(self, node_id: str) -> NodeSpec:
        try:
            return self.node_map[node_id]
        except KeyError:
            raise UnknownNodeError(f"unknown node {node_id!r}") from None

    def inbound(self, node_id: str) -> list[int]:
        return self._inbound[node_id]

    def outbound(self, node_id: str) -> list[int]:
        return self._outbound[node_id]

    def max_delay(self) -> int:
        return max((operator_delay(e.op) for e in self.edges), default=0)

    def edges_between(self, src: str, dst: str) -> list[int]:
        return [i for i in self._outbound.get(src, ()) if self.edges[i].dst == dst]

    def gains(self) -> tuple[float, ...]:
        """Resolved per-edge gains: explicit document value or the default
        local sensitivity at the initial state."""
        if self._gains is None:
            out = []
            for edge in self.edges:
                if edge.gain is not None:
                    out.append(float(edge.gain))
                else:
                    dst = self.node(edge.dst)
                    out.append(default_gain(edge.op, dst.initial_array()))
            self._gains = tuple(out)
        return self._gains

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.nodes == other.nodes
            and self.edges == other.edges
            and self.allow_intra_layer_cycles == other.allow_intra_layer_cycles
        )

    # -- validation ---------------------------------------------------------

    def validation_report(self) -> GraphValidationReport:
        if self._report is None:
            self._report = validate_graph(self)
        return self._report

    def require_valid(self) -> None:
        report = self.validation_report()
        if not report.passed:
            raise InvalidGraphError(report)


def _strongly_connected_components(
    graph: Graph, edge_indices: set[int]
) -> list[list[str]]:
    """Kosaraju over the node ids, restricted to the given edges."""
    forward: dict[str, list[str]] = {n.id: [] for n in graph.nodes}
    backward: dict[str, list[str]] = {n.id: [] for n in graph.nodes}
    for idx in sorted(edge_indices):
        edge = graph.edges[idx]
        forward[edge.src].append(edge.dst)
        backward[edge.dst].append(edge.src)

    order: list[str] = []
    seen: set[str] = set()
    for start in forward:
        if start in seen:
            continue
        stack = [(start, iter(forward[start]))]
        seen.add(start)
        while stack:
            node, it = stack[-1]
            advanced = False
            for nbr in it:
                if nbr not in seen:
                    seen.add(nbr)
                    stack.append((nbr, iter(forward[nbr])))
                    advanced = True
                    break
            if not advanced:
                order.append(node)
                stack.pop()

    components: list[list[str]] = []
    assigned: set[str] = set()
    for start in reversed(order):
        if start in assigned:
            continue
        component = [start]
        assigned.add(start)
        stack = [start]
        while stack:
            node = stack.pop()
            for nbr in backward[node]:
                if nbr not in assigned:
                    assigned.add(nbr)
                    component.append(nbr)
                    stack.append(nbr)
        components.append(component)
    return components


def _find_cycle_path(graph: Graph, component: set[str]) -> list[str]:
    """A concrete directed cycle within a nontrivial SCC, for error messages."""
    start = min(component)
    parents: dict[str, str] = {start: start}
    queue = [start]
    while queue:
        node = queue.pop(0)
        for idx in graph.outbound(node):
            nbr = graph.edges[idx].dst
            if nbr == start:
                path = [start]
                walk = node
                rev = []
                while walk != start:
                    rev.append(walk)
                    walk = parents[walk]
                return path + rev[::-1] + [start]
            if nbr in component and nbr not in parents:
                parents[nbr] = node
                queue.append(nbr)
    return [start, start]


def validate_graph(graph: Graph) -> GraphValidationReport:
    """Structural validation: endpoints resolve, no self-loops, matching
    edge dimensions, and the cycle policy (cross-layer cycles are always
    errors; intra-layer cycles need their layer whitelisted)."""
    report = GraphValidationReport()
    valid_edges: set[int] = set()
    for idx, edge in enumerate(graph.edges):
        broken = False
        for endpoint in (edge.src, edge.dst):
            if endpoint not in graph.node_map:
                report.issues.append(
                    f"edge {edge.src!r}->{edge.dst!r}: dangling endpoint {endpoint!r}"
                )
                broken = True
        if broken:
            continue
        if edge.src == edge.dst:
            report.issues.append(f"self-loop on node {edge.src!r}")
            continue
        src, dst = graph.node(edge.src), graph.node(edge.dst)
        if src.dim != dst.dim:
            report.issues.append(
                f"edge {edge.src!r}->{edge.dst!r}: dimension mismatch "
                f"{src.dim} vs {dst.dim}"
            )
            continue
        valid_edges.add(idx)

    components = _strongly_connected_components(graph, valid_edges)
    for component in components:
        if len(component) < 2:
            continue
        layers = {graph.node(nid).cell.layer for nid in component}
        cycle = _find_cycle_path(graph, set(component))
        report.cycle_paths.append(cycle)
        pretty = " -> ".join(cycle)
        if len(layers) > 1:
            report.issues.append(f"cross-layer cycle: {pretty}")
        elif next(iter(layers)) not in graph.allow_intra_layer_cycles:
            report.issues.append(
                f"intra-layer cycle in layer {next(iter(layers))} "
                f"(not whitelisted): {pretty}"
            )
    return report


# ---------------------------------------------------------------------------
# state and stepping
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class State:
    """Time-indexed graph state.

    ``values`` is the deviation vector that edges propagate; ``levels`` the
    accumulated node values; ``history`` the ring of past deviation
    snapshots, deep enough for the largest edge delay.  Negative-time
    access falls back to the node's declared initial value.
    """

    t: int
    values: dict[str, np.ndarray]
    levels: dict[str, np.ndarray]
    history: tuple[dict[str, np.ndarray], ...] = ()
    initials: dict[str, np.ndarray] = field(default_factory=dict)
    seed: int = 0

    def lagged_value(self, node: str, delta_t: int) -> np.ndarray:
        target = self.t - delta_t
        if target < 0:
            if node not in self.initials:
                raise StateError(f"no initial value recorded for node {node!r}")
            return self.initials[node]
        index = target - (self.t - len(self.history))
        if index < 0:
            raise StateError(
                f"history ring too shallow for lag {delta_t} at t={self.t}"
            )
        return self.history[index][node]


def _as_vector(value, dim: int, node_id: str) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    if arr.shape != (dim,):
        raise StateError(
            f"value for node {node_id!r} has shape {arr.shape}, expected ({dim},)"
        )
    return arr


def initial_state(
    graph: Graph,
    overrides: Mapping[str, object] | None = None,
    shock: Mapping[str, object] | None = None,
    seed: int = 0,
) -> State:
    """State at t=0: declared initials, plus overrides, plus the t=0 shock.

    Shock entries scheduled for step 0 belong to the state at step 0; later
    entries are injected by the step that produces their state.
    """
    values: dict[str, np.ndarray] = {}
    initials: dict[str, np.ndarray] = {}
    for node in graph.nodes:
        vec = node.initial_array().copy()
        initials[node.id] = node.initial_array()
        if overrides and node.id in overrides:
            vec = _as_vector(overrides[node.id], node.dim, node.id)
        values[node.id] = vec
    if overrides:
        for key in overrides:
            if key not in graph.node_map:
                raise UnknownNodeError(f"initial value for unknown node {key!r}")
    if shock:
        for key, delta in shock.items():
            node = graph.node(key)
            values[key] = values[key] + _as_vector(delta, node.dim, key)
    levels = {k: v.copy() for k, v in values.items()}
    return State(0, values, levels, (), initials, seed)


def _aggregation_delta(
    node: NodeSpec, level: np.ndarray, contributions: np.ndarray, t_next: int
) -> np.ndarray:
    agg = node.aggregation
    if agg.kind == "additive":
        return contributions
    if agg.kind == "multiplicative":
        return level * contributions
    if agg.kind == "min":
        return np.minimum(level, contributions) - level
    # discounted-additive: contributions landing at t_next discounted to t=0
    return contributions / (1.0 + agg.rate) ** t_next


def _aggregation_outer_derivative(
    node: NodeSpec, level: np.ndarray, contributions: np.ndarray, t_next: int
) -> np.ndarray:
    """d(delta)/d(contribution sum), componentwise."""
    agg = node.aggregation
    if agg.kind == "additive":
        return np.ones_like(level)
    if agg.kind == "multiplicative":
        return level.copy()
    if agg.kind == "min":
        return np.where(contributions <= level, 1.0, 0.0)
    return np.full_like(level, 1.0 / (1.0 + agg.rate) ** t_next)


def _contribution_sums(graph: Graph, state: State) -> dict[str, np.ndarray]:
    sums: dict[str, np.ndarray] = {}
    for node in graph.nodes:
        indices = graph.inbound(node.id)
        if not indices:
            continue
        total = np.zeros(node.dim)
        for idx in indices:
            edge = graph.edges[idx]
            total = total + apply_operator(
                edge.op, state.values[edge.src], state, source=edge.src, channel=idx
            )
        sums[node.id] = total
    return sums


def step(
    graph: Graph,
    state: State,
    shock: Mapping[str, object] | None = None,
) -> State:
    """One simultaneous update: every read comes from time t.

    The shock argument is the exogenous delta scheduled for the produced
    step t+1; it adds after aggregation.
    """
    graph.require_valid()
    shock_vecs: dict[str, np.ndarray] = {}
    if shock:
        for key, delta in shock.items():
            node = graph.node(key)
            shock_vecs[key] = _as_vector(delta, node.dim, key)

    t_next = state.t + 1
    sums = _contribution_sums(graph, state)
    new_values: dict[str, np.ndarray] = {}
    new_levels: dict[str, np.ndarray] = {}
    for node in graph.nodes:
        level = state.levels[node.id]
        if node.id in sums:
            delta = _aggregation_delta(node, level, sums[node.id], t_next)
        else:
            delta = np.zeros(node.dim)
        if node.id in shock_vecs:
            delta = delta + shock_vecs[node.id]
        new_level = level + delta
        if not np.all(np.isfinite(new_level)) or not np.all(np.isfinite(delta)):
            raise NumericOverflowError(
                f"node {node.id!r} produced a non-finite value at t={t_next}"
            )
        new_values[node.id] = delta
        new_levels[node.id] = new_level

    depth = graph.max_delay()
    history = ()
    if depth > 0:
        history = (state.history + (state.values,))[-depth:]
    return State(t_next, new_values, new_levels, history, state.initials, state.seed)


# ---------------------------------------------------------------------------
# linearization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PropagationMatrix:
    """Dense one-step sensitivity matrix over flattened node components.

    Delayed edges are represented in companion form: one auxiliary block per
    lag step, so the spectral radius keeps its stability meaning.  Auxiliary
    rows are labelled "aux:<src>-><dst>#<edge>@<lag>" in the legend.
    """

    matrix: np.ndarray
    labels: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.matrix.ndim != 2 or self.matrix.shape[0] != self.matrix.shape[1]:
            raise GraphError(f"propagation matrix must be square, got {self.matrix.shape}")
        if self.matrix.shape[0] != len(self.labels):
            raise GraphError("legend length does not match matrix size")

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise UnknownNodeError(f"no component labelled {label!r}") from None

    def entry(self, dst_label: str, src_label: str) -> float:
        return float(self.matrix[self.index(dst_label), self.index(src_label)])

    def node_submatrix(self) -> np.ndarray:
        """The block over real node components (auxiliary rows stripped)."""
        keep = [i for i, lab in enumerate(self.labels) if not lab.startswith("aux:")]
        return self.matrix[np.ix_(keep, keep)]


def component_labels(graph: Graph) -> list[str]:
    labels = []
    for node in graph.nodes:
        if node.dim == 1:
            labels.append(node.id)
        else:
            labels.extend(f"{node.id}[{j}]" for j in range(node.dim))
    return labels


def linearize(graph: Graph, state: State | None = None) -> PropagationMatrix:
    """Jacobian of the one-step deviation map at the given state.

    Entries are analytic for linear and multiplicative edges and finite
    differences for threshold and stochastic ones (frozen seeds).  The
    matrix is zero exactly where no edge exists.
    """
    graph.require_valid()
    if state is None:
        state = initial_state(graph)

    offsets: dict[str, int] = {}
    labels = component_labels(graph)
    pos = 0
    for node in graph.nodes:
        offsets[node.id] = pos
        pos += node.dim
    n_real = pos

    aux_blocks: list[tuple[int, str, int]] = []  # (edge index, src, lag)
    for idx, edge in enumerate(graph.edges):
        lag = operator_delay(edge.op)
        for j in range(1, lag + 1):
            aux_blocks.append((idx, edge.src, j))

    aux_offsets: dict[tuple[int, int], int] = {}
    for edge_idx, src, lag in aux_blocks:
        dim = graph.node(src).dim
        aux_offsets[(edge_idx, lag)] = pos
        if dim == 1:
            labels.append(f"aux:{graph.edges[edge_idx].src}->"
                          f"{graph.edges[edge_idx].dst}#{edge_idx}@{lag}")
        else:
            labels.extend(
                f"aux:{graph.edges[edge_idx].src}->"
                f"{graph.edges[edge_idx].dst}#{edge_idx}@{lag}[{j}]"
                for j in range(dim)
            )
        pos += dim

    matrix = np.zeros((pos, pos))
    sums = _contribution_sums(graph, state)
    t_next = state.t + 1

    for idx, edge in enumerate(graph.edges):
        src = graph.node(edge.src)
        dst = graph.node(edge.dst)
        level = state.levels[dst.id]
        contributions = sums.get(dst.id, np.zeros(dst.dim))
        outer = _aggregation_outer_derivative(dst, level, contributions, t_next)
        dst_off = offsets[dst.id]
        src_off = offsets[src.id]
        lag = operator_delay(edge.op)
        if lag == 0:
            inner = operator_derivative(edge.op, state.values[src.id], state, channel=idx)
            for j in range(src.dim):
                matrix[dst_off + j, src_off + j] += outer[j] * inner[j]
        else:
            # companion chain: aux@1 reads the source, aux@k reads aux@(k-1),
            # the destination reads aux@lag through the inner derivative
            first = aux_offsets[(idx, 1)]
            for j in range(src.dim):
                matrix[first + j, src_off + j] = 1.0
            for k in range(2, lag + 1):
                cur = aux_offsets[(idx, k)]
                prev = aux_offsets[(idx, k - 1)]
                for j in range(src.dim):
                    matrix[cur + j, prev + j] = 1.0
            lagged = state.lagged_value(src.id, lag)
            inner = operator_derivative(edge.op, lagged, state, channel=idx)
            last = aux_offsets[(idx, lag)]
            for j in range(src.dim):
                matrix[dst_off + j, last + j] += outer[j] * inner[j]

    return PropagationMatrix(matrix, tuple(labels))
