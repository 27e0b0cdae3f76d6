"""Cluster-topology metrics that are graph computations, not closed forms:
network diameter, interconnect bisection bandwidth (global minimum cut),
balanced bisection bandwidth, and the oversubscription ratio.

The minimum cut uses a deterministic Stoer-Wagner contraction with ties
broken by node-id order, so repeated runs and node relabelings give
reproducible results.  Balanced bisection is exhaustive and therefore
capped at 20 nodes; beyond that the unbalanced minimum cut is the
tractable stand-in.

The two bisection quantities are computed independently: the convention
that the balanced figure is half the unbalanced one does not hold in
general (balanced cuts are a subset of all cuts), so no such relation is
enforced here.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .errors import (
    ConnectivityError,
    DataError,
    DocumentError,
    SchemaVersionError,
    SingularInputError,
    SizeError,
    TopologyScaleError,
)
from .units import Quantity, Unit, parse_unit

TOPOLOGY_SCHEMA = "topo-v1"
BALANCED_BISECTION_MAX_NODES = 20


@dataclass(frozen=True)
class ClusterTopology:
    """Undirected cluster graph with positive link bandwidths.

    Parallel links between the same pair are merged by summing bandwidth,
    matching cut-weight semantics.
    """

    nodes: tuple[str, ...]
    links: dict[frozenset, float] = field(default_factory=dict)
    bandwidth_unit: Unit = Unit()
    gpu_aggregate_bw: float | None = None
    switch_uplink_bw: float | None = None

    @staticmethod
    def build(
        nodes,
        links,
        bandwidth_unit: Unit | str = "",
        gpu_aggregate_bw: float | None = None,
        switch_uplink_bw: float | None = None,
    ) -> "ClusterTopology":
        node_tuple = tuple(str(n) for n in nodes)
        if len(set(node_tuple)) != len(node_tuple):
            raise DataError("duplicate node ids in topology")
        known = set(node_tuple)
        merged: dict[frozenset, float] = {}
        for a, b, bw in links:
            a, b = str(a), str(b)
            if a == b:
                raise DataError(f"self-link on node {a!r}")
            if a not in known or b not in known:
                missing = a if a not in known else b
                raise DataError(f"link endpoint {missing!r} is not a declared node")
            if bw <= 0:
                raise DataError(f"link {a!r}-{b!r} has non-positive bandwidth {bw}")
            key = frozenset((a, b))
            merged[key] = merged.get(key, 0.0) + float(bw)
        unit = bandwidth_unit if isinstance(bandwidth_unit, Unit) else parse_unit(bandwidth_unit)
        return ClusterTopology(node_tuple, merged, unit, gpu_aggregate_bw, switch_uplink_bw)

    def adjacency(self) -> dict[str, dict[str, float]]:
        adj: dict[str, dict[str, float]] = {n: {} for n in self.nodes}
        for key, bw in self.links.items():
            a, b = tuple(key)
            adj[a][b] = bw
            adj[b][a] = bw
        return adj


def parse_topology_document(document) -> ClusterTopology:
    """Parse a "topo-v1" document from JSON text or a dict."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise DocumentError(
                f"topology parse failure at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from None
    if not isinstance(document, dict):
        raise DocumentError("topology document must be a JSON object")
    if document.get("schema") != TOPOLOGY_SCHEMA:
        raise SchemaVersionError(
            f"expected schema {TOPOLOGY_SCHEMA!r}, got {document.get('schema')!r}"
        )
    try:
        links = [(l["a"], l["b"], float(l["bw"])) for l in document.get("links", [])]
        return ClusterTopology.build(
            document["nodes"],
            links,
            document.get("unit", ""),
            document.get("gpu_aggregate_bw"),
            document.get("switch_uplink_bw"),
        )
    except KeyError as exc:
        raise DocumentError(f"topology document missing field {exc}") from None


def _check_connected(topo: ClusterTopology) -> None:
    adj = topo.adjacency()
    start = topo.nodes[0]
    seen = {start}
    queue = deque([start])
    while queue:
        for nbr in adj[queue.popleft()]:
            if nbr not in seen:
                seen.add(nbr)
                queue.append(nbr)
    if len(seen) != len(topo.nodes):
        missing = sorted(set(topo.nodes) - seen)
        raise ConnectivityError(
            f"topology is disconnected; unreachable from {start!r}: {missing}"
        )


def network_diameter(topo: ClusterTopology) -> int:
    """Maximum over node pairs of the unweighted shortest-path hop count."""
    if len(topo.nodes) < 2:
        raise SizeError("network diameter needs at least 2 nodes")
    _check_connected(topo)
    adj = topo.adjacency()
    diameter = 0
    for source in topo.nodes:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            node = queue.popleft()
            for nbr in adj[node]:
                if nbr not in dist:
                    dist[nbr] = dist[node] + 1
                    queue.append(nbr)
        diameter = max(diameter, max(dist.values()))
    return diameter


def _stoer_wagner_value(adj: dict[str, dict[str, float]]) -> float:
    """Deterministic Stoer-Wagner minimum cut value.

    Each phase runs a maximum-adjacency sweep starting from the smallest
    node id; ties in adjacency weight are broken toward the smaller id.
    The last two nodes of the sweep are merged for the next phase.
    """
    graph = {u: dict(nbrs) for u, nbrs in adj.items()}
    best = float("inf")
    while len(graph) > 1:
        order = sorted(graph)
        start = order[0]
        in_a = {start}
        weights = {u: graph[start].get(u, 0.0) for u in graph if u != start}
        sweep = [start]
        while len(in_a) < len(graph):
            # max weight, ties to the smallest id
            nxt = min(weights, key=lambda u: (-weights[u], u))
            sweep.append(nxt)
            in_a.add(nxt)
            cut_of_phase = weights.pop(nxt)
            for v, w in graph[nxt].items():
                if v not in in_a:
                    weights[v] = weights.get(v, 0.0) + w
        best = min(best, cut_of_phase)
        # merge the last two nodes of the sweep
        s, t = sweep[-2], sweep[-1]
        for v, w in graph[t].items():
            if v == s:
                continue
            graph[s][v] = graph[s].get(v, 0.0) + w
            graph[v][s] = graph[s][v]
            del graph[v][t]
        graph[s].pop(t, None)
        del graph[t]
    return best


def interconnect_bisection_bandwidth(topo: ClusterTopology) -> Quantity:
    """Global minimum cut weight over all 2-partitions (balance not required)."""
    if len(topo.nodes) < 2:
        raise SizeError("bisection bandwidth needs at least 2 nodes")
    _check_connected(topo)
    value = _stoer_wagner_value(topo.adjacency())
    return Quantity(value, topo.bandwidth_unit)


def balanced_bisection_bandwidth(topo: ClusterTopology) -> Quantity:
    """Minimum cut weight over partitions of sizes floor(n/2) and ceil(n/2).

    Exhaustive enumeration; refuses more than 20 nodes (the general problem
    is NP-hard) and points at the unbalanced cut instead.
    """
    n = len(topo.nodes)
    if n < 2:
        raise SizeError("balanced bisection needs at least 2 nodes")
    if n > BALANCED_BISECTION_MAX_NODES:
        raise TopologyScaleError(
            f"balanced bisection is exhaustive and capped at "
            f"{BALANCED_BISECTION_MAX_NODES} nodes (got {n}); use the "
            f"interconnect bisection bandwidth for larger clusters"
        )
    _check_connected(topo)
    half = n // 2
    nodes = topo.nodes
    best = float("inf")
    if n % 2 == 0:
        # fix nodes[0] on one side so each partition is enumerated once
        candidates = (
            (nodes[0],) + rest for rest in combinations(nodes[1:], half - 1)
        )
    else:
        candidates = combinations(nodes, half)
    for side in candidates:
        side_set = set(side)
        weight = sum(
            bw for key, bw in topo.links.items() if len(key & side_set) == 1
        )
        best = min(best, weight)
    return Quantity(best, topo.bandwidth_unit)


def oversubscription_ratio(topo: ClusterTopology) -> float:
    """Aggregate GPU bandwidth over switch uplink bandwidth (dimensionless)."""
    if topo.gpu_aggregate_bw is None or topo.switch_uplink_bw is None:
        raise DataError(
            "oversubscription ratio needs gpu_aggregate_bw and switch_uplink_bw"
        )
    if topo.switch_uplink_bw == 0:
        raise SingularInputError("switch_uplink_bw is 0")
    return topo.gpu_aggregate_bw / topo.switch_uplink_bw
