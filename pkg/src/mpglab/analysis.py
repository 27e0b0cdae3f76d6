"""Analyses over a propagation graph: spectral stability, path composition
and amplification, bottleneck/leverage ranking, and composite-metric
synthesis.

The spectral radius drives the stability verdict: below one, deviations
attenuate and long-run cost responses stay bounded; above one, the graph
amplifies and trajectories diverge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalog import Direction, MetricDef
from .errors import (
    PathError,
    PathScaleError,
    ReachabilityError,
    ShapeError,
)
from .expressions import Lit
from .graph import Graph, PropagationMatrix, State, initial_state, linearize
from .operators import apply_operator
from .units import Unit

GELFAND_TOL = 1e-9
GELFAND_MAX_POWER = 2 ** 20
STABILITY_MARGIN = 1e-9
LEVERAGE_PATH_CAP = 8
SYNTHESIS_PATH_LIMIT = 10 ** 6


@dataclass(frozen=True)
class SpectralResult:
    rho: float
    direction: np.ndarray  # normalized leading power-iterate (informational)
    exact: bool  # True when W is (block-)triangular with scalar blocks


def _as_matrix(W) -> np.ndarray:
    if isinstance(W, PropagationMatrix):
        return W.matrix
    arr = np.asarray(W, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ShapeError(f"spectral radius needs a square matrix, got {arr.shape}")
    return arr


def _sparsity_sccs(A: np.ndarray) -> list[list[int]]:
    """Kosaraju SCCs of the nonzero pattern (i -> j when A[j, i] != 0)."""
    n = A.shape[0]
    forward = [list(np.nonzero(A[:, i])[0]) for i in range(n)]
    backward = [list(np.nonzero(A[i, :])[0]) for i in range(n)]
    order: list[int] = []
    seen = [False] * n
    for start in range(n):
        if seen[start]:
            continue
        seen[start] = True
        stack = [(start, iter(forward[start]))]
        while stack:
            node, it = stack[-1]
            advanced = False
            for nbr in it:
                if not seen[nbr]:
                    seen[nbr] = True
                    stack.append((nbr, iter(forward[nbr])))
                    advanced = True
                    break
            if not advanced:
                order.append(node)
                stack.pop()
    components: list[list[int]] = []
    assigned = [False] * n
    for start in reversed(order):
        if assigned[start]:
            continue
        component = [start]
        assigned[start] = True
        stack = [start]
        while stack:
            node = stack.pop()
            for nbr in backward[node]:
                if not assigned[nbr]:
                    assigned[nbr] = True
                    component.append(nbr)
                    stack.append(nbr)
        components.append(component)
    return components


def _gelfand(A: np.ndarray) -> float:
    """rho estimate via ||A^k||^(1/k) with k doubling; log-scaled squaring
    keeps powers representable for rho far from 1."""
    norm = float(np.linalg.norm(A, 2))
    if norm == 0.0:
        return 0.0
    estimate = norm
    current = A / norm
    log_scale = math.log(norm)
    k = 1
    while k < GELFAND_MAX_POWER:
        squared = current @ current
        norm_sq = float(np.linalg.norm(squared, 2))
        if norm_sq == 0.0:
            return 0.0  # nilpotent
        k *= 2
        log_scale = 2.0 * log_scale + math.log(norm_sq)
        current = squared / norm_sq
        new_estimate = math.exp(log_scale / k)
        if abs(new_estimate - estimate) <= GELFAND_TOL * max(abs(new_estimate), 1e-300):
            return new_estimate
        estimate = new_estimate
    return estimate


def _dominant_direction(A: np.ndarray, iterations: int = 200) -> np.ndarray:
    n = A.shape[0]
    if n == 0:
        return np.zeros(0)
    v = np.ones(n) / math.sqrt(n)
    for _ in range(iterations):
        w = A @ v
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            return np.zeros(n)
        v = w / norm
    return v


def spectral_radius(W) -> SpectralResult:
    """Spectral radius with a dominant-direction estimate.

    For matrices whose nonzero pattern is a DAG apart from self-entries
    (block-triangular with scalar blocks under a permutation) the exact
    value max|diagonal| is returned; otherwise each nontrivial block gets
    the Gelfand iteration and the maximum wins.
    """
    A = _as_matrix(W)
    if A.shape[0] == 0:
        return SpectralResult(0.0, np.zeros(0), True)
    candidates = []
    exact = True
    for component in _sparsity_sccs(A):
        if len(component) == 1:
            i = component[0]
            candidates.append(abs(float(A[i, i])))
        else:
            exact = False
            block = A[np.ix_(component, component)]
            candidates.append(_gelfand(block))
    rho = max(candidates)
    return SpectralResult(rho, _dominant_direction(A), exact)


@dataclass(frozen=True)
class StabilityResult:
    classification: str  # "stable" | "marginal" | "divergent"
    rho: float
    matrix: PropagationMatrix


def stability_classification(graph: Graph, state: State | None = None) -> StabilityResult:
    """Classify the linearized dynamics at a state (default: initial)."""
    W = linearize(graph, state if state is not None else initial_state(graph))
    rho = spectral_radius(W).rho
    if rho < 1.0 - STABILITY_MARGIN:
        label = "stable"
    elif rho > 1.0 + STABILITY_MARGIN:
        label = "divergent"
    else:
        label = "marginal"
    return StabilityResult(label, rho, W)


# ---------------------------------------------------------------------------
# path composition and amplification
# ---------------------------------------------------------------------------


def _resolve_path_edges(
    graph: Graph, path: list[str], edge_indices: list[int] | None = None
) -> list[int]:
    if len(path) < 2:
        return []
    for node_id in path:
        graph.node(node_id)  # raises UnknownNodeError
    resolved: list[int] = []
    for hop, (a, b) in enumerate(zip(path, path[1:])):
        candidates = graph.edges_between(a, b)
        if not candidates:
            raise PathError(f"no edge {a!r} -> {b!r} at hop {hop}")
        if edge_indices is not None and hop < len(edge_indices):
            choice = edge_indices[hop]
            if choice not in candidates:
                raise PathError(
                    f"edge index {choice} does not join {a!r} -> {b!r} at hop {hop}"
                )
            resolved.append(choice)
        elif len(candidates) == 1:
            resolved.append(candidates[0])
        else:
            raise PathError(
                f"parallel edges {candidates} between {a!r} and {b!r}; "
                f"name edge indices to disambiguate hop {hop}"
            )
    return resolved


@dataclass(frozen=True)
class CompositeOperator:
    """Functional composition of the operators along a path."""

    graph: Graph
    path: tuple[str, ...]
    edge_indices: tuple[int, ...]

    def apply(self, value, state: State | None = None) -> np.ndarray:
        out = np.atleast_1d(np.asarray(value, dtype=float))
        for idx in self.edge_indices:
            edge = self.graph.edges[idx]
            out = apply_operator(edge.op, out, state, source=edge.src, channel=idx)
        return out

    def __call__(self, value, state: State | None = None) -> np.ndarray:
        return self.apply(value, state)

    @property
    def is_linear(self) -> bool:
        from .operators import Linear

        return all(isinstance(self.graph.edges[i].op, Linear) for i in self.edge_indices)

    def linear_coefficient(self) -> float | None:
        """Product of alphas for an all-linear path, else None."""
        from .operators import Linear

        if not self.is_linear:
            return None
        coefficient = 1.0
        for idx in self.edge_indices:
            coefficient *= self.graph.edges[idx].op.alpha
        return coefficient


def compose_path(
    graph: Graph, path: list[str], edge_indices: list[int] | None = None
) -> CompositeOperator:
    """Composite operator along consecutive edges of a node path.

    Parallel edges between a pair must be disambiguated by naming edge
    indices (positions in graph.edges).
    """
    resolved = _resolve_path_edges(graph, list(path), edge_indices)
    return CompositeOperator(graph, tuple(path), tuple(resolved))


@dataclass(frozen=True)
class AmplificationResult:
    gamma: float
    amplifying: bool  # gamma > 1


def amplification_factor(
    graph: Graph, path: list[str], edge_indices: list[int] | None = None
) -> AmplificationResult:
    """Product of edge gains along the path; amplifying when it exceeds 1."""
    resolved = _resolve_path_edges(graph, list(path), edge_indices)
    gains = graph.gains()
    gamma = 1.0
    for idx in resolved:
        gamma *= gains[idx]
    return AmplificationResult(gamma, gamma > 1.0)


# ---------------------------------------------------------------------------
# bottlenecks, leverage, composite metrics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NodeScore:
    node_id: str
    score: float


def find_bottlenecks(graph: Graph) -> list[NodeScore]:
    """Nodes ranked by weighted in-degree (sum of |gain| over inbound
    edges), descending; ties break toward the smaller node id."""
    gains = graph.gains()
    scores = [
        NodeScore(node.id, sum(abs(gains[i]) for i in graph.inbound(node.id)))
        for node in graph.nodes
    ]
    return sorted(scores, key=lambda s: (-s.score, s.node_id))


@dataclass(frozen=True)
class LeverageScore:
    node_id: str
    score: float  # weighted out-degree
    influence: float  # sum of |gamma| over simple downstream paths (length <= 8)


def _downstream_influence(graph: Graph, start: str, cap: int = LEVERAGE_PATH_CAP) -> float:
    gains = graph.gains()
    total = 0.0

    def walk(node: str, visited: frozenset, product: float, depth: int) -> None:
        nonlocal total
        if depth >= cap:
            return
        for idx in graph.outbound(node):
            edge = graph.edges[idx]
            if edge.dst in visited:
                continue
            leg = product * abs(gains[idx])
            total += leg
            walk(edge.dst, visited | {edge.dst}, leg, depth + 1)

    walk(start, frozenset({start}), 1.0, 0)
    return total


def find_leverage_points(graph: Graph) -> list[LeverageScore]:
    """Nodes ranked by weighted out-degree, with an auxiliary downstream
    influence score (sum of |gamma| over simple paths out of the node,
    capped at 8 hops)."""
    gains = graph.gains()
    scores = [
        LeverageScore(
            node.id,
            sum(abs(gains[i]) for i in graph.outbound(node.id)),
            _downstream_influence(graph, node.id),
        )
        for node in graph.nodes
    ]
    return sorted(scores, key=lambda s: (-s.score, s.node_id))


def synthesize_composite_metric(
    graph: Graph, src: str, dst: str
) -> tuple[MetricDef, float]:
    """Derived metric whose coefficient sums the amplification factor over
    every simple src->dst path (parallel edges count as distinct paths).

    src == dst yields the identity metric with coefficient 1.
    """
    src_node = graph.node(src)
    dst_node = graph.node(dst)
    gains = graph.gains()

    if src == dst:
        coefficient = 1.0
        n_paths = 1
    else:
        coefficient = 0.0
        n_paths = 0

        def walk(node: str, visited: frozenset, product: float) -> None:
            nonlocal coefficient, n_paths
            for idx in graph.outbound(node):
                edge = graph.edges[idx]
                if edge.dst == dst:
                    n_paths += 1
                    if n_paths > SYNTHESIS_PATH_LIMIT:
                        raise PathScaleError(
                            f"more than {SYNTHESIS_PATH_LIMIT} simple paths "
                            f"{src!r} -> {dst!r}"
                        )
                    coefficient += product * gains[idx]
                elif edge.dst not in visited:
                    walk(edge.dst, visited | {edge.dst}, product * gains[idx])

        walk(src, frozenset({src}), 1.0)
        if n_paths == 0:
            raise ReachabilityError(f"no path from {src!r} to {dst!r}")

    unit: Unit = dst_node.unit / src_node.unit
    metric = MetricDef(
        id=f"{dst}_per_{src}",
        name=f"{dst} per unit {src} (propagated)",
        cell=dst_node.cell,
        unit=unit,
        inputs={},
        formula=Lit(coefficient, unit),
        direction=Direction.CONTEXTUAL,
        note=f"synthesized from {n_paths} propagation path(s) {src} -> {dst}",
    )
    return metric, coefficient
