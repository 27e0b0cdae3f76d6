"""Time-horizon simulations over a propagation graph, including the bundled
1024-GPU training-cluster case study, plus trajectory summaries.

A scenario pairs a graph with a horizon, an initial state, a shock
schedule, and a seed.  Shocks scheduled for step t are injected into the
state at step t: a single entry at t=0 is an impulse; a sustained
disturbance lists its delta at every step.  Node values in the case study
are relative deviations from nominal (dimensionless): the edge weights are
sensitivities between fractional changes, so a +0.20 entry means "a 20%
increase".
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ScenarioError, UnknownNodeError
from .graph import EdgeSpec, Graph, NodeSpec, State, initial_state, step
from .operators import Linear
from .taxonomy import Cell
from .units import Unit

OVERFLOW_LIMIT = 1e30
SETTLE_TOL = 1e-12


@dataclass(frozen=True)
class ShockEntry:
    t: int
    node: str
    delta: tuple[float, ...]

    @staticmethod
    def of(t: int, node: str, delta) -> "ShockEntry":
        vec = np.atleast_1d(np.asarray(delta, dtype=float))
        return ShockEntry(int(t), str(node), tuple(float(v) for v in vec))


@dataclass(frozen=True)
class ShockSchedule:
    entries: tuple[ShockEntry, ...] = ()

    def at(self, t: int) -> dict[str, np.ndarray]:
        """Merged deltas scheduled for step t (same-node entries sum)."""
        out: dict[str, np.ndarray] = {}
        for entry in self.entries:
            if entry.t == t:
                vec = np.asarray(entry.delta, dtype=float)
                out[entry.node] = out.get(entry.node, 0.0) + vec
        return out


@dataclass(frozen=True)
class Scenario:
    graph: Graph
    horizon: int
    shocks: ShockSchedule = ShockSchedule()
    initial: dict[str, tuple[float, ...]] | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.horizon < 1:
            raise ScenarioError(f"horizon must be >= 1, got {self.horizon}")
        for entry in self.shocks.entries:
            if not 0 <= entry.t < self.horizon:
                raise ScenarioError(
                    f"shock at t={entry.t} lies outside [0, {self.horizon})"
                )
            if entry.node not in self.graph.node_map:
                raise UnknownNodeError(
                    f"shock targets unknown node {entry.node!r}"
                )
        if self.initial:
            for node in self.initial:
                if node not in self.graph.node_map:
                    raise UnknownNodeError(
                        f"initial value for unknown node {node!r}"
                    )


@dataclass(frozen=True)
class Trajectory:
    """States for t = 0..T (shorter only if the run overflowed)."""

    scenario: Scenario
    states: tuple[State, ...]
    overflow_step: int | None = None

    @property
    def horizon(self) -> int:
        return self.scenario.horizon

    def node_ids(self) -> list[str]:
        return [n.id for n in self.scenario.graph.nodes]

    def levels(self, node: str) -> np.ndarray:
        """Accumulated value series for one node, shape (steps, dim)."""
        return np.array([s.levels[node] for s in self.states])

    def deviations(self, node: str) -> np.ndarray:
        return np.array([s.values[node] for s in self.states])

    def final_levels(self) -> dict[str, np.ndarray]:
        return dict(self.states[-1].levels)


def run(scenario: Scenario) -> Trajectory:
    """Iterate the step map for the scenario horizon, applying scheduled
    shocks; halts early with a recorded overflow step if any magnitude
    passes 1e30 (divergence is an analytical outcome, not an error)."""
    graph = scenario.graph
    graph.require_valid()
    state = initial_state(
        graph,
        overrides=scenario.initial,
        shock=scenario.shocks.at(0),
        seed=scenario.seed,
    )
    states = [state]
    overflow_step = None
    for t in range(scenario.horizon):
        state = step(graph, state, shock=scenario.shocks.at(t + 1))
        states.append(state)
        magnitude = max(
            float(np.max(np.abs(v))) for v in state.levels.values()
        )
        deviation = max(
            float(np.max(np.abs(v))) for v in state.values.values()
        )
        if max(magnitude, deviation) > OVERFLOW_LIMIT:
            overflow_step = state.t
            break
    return Trajectory(scenario, tuple(states), overflow_step)


def perturbation_response(
    graph: Graph, node: str, delta: float, horizon: int
) -> dict[str, np.ndarray | float]:
    """Impulse response: a single shock at t=0 from the zero state; returns
    each node's accumulated value at t=horizon (scalars for 1-dim nodes)."""
    zeros = {n.id: tuple(0.0 for _ in range(n.dim)) for n in graph.nodes}
    scenario = Scenario(
        graph,
        horizon,
        ShockSchedule((ShockEntry.of(0, node, delta),)),
        initial=zeros,
    )
    trajectory = run(scenario)
    out: dict[str, np.ndarray | float] = {}
    for node_spec in graph.nodes:
        vec = trajectory.states[-1].levels[node_spec.id]
        out[node_spec.id] = float(vec[0]) if node_spec.dim == 1 else vec
    return out


@dataclass(frozen=True)
class NodeSummary:
    node_id: str
    peak: float  # max |level| over the run
    peak_step: int
    final: float | tuple[float, ...]
    settled: bool  # final two steps differ < 1e-12
    monotonicity: str  # constant | nondecreasing | nonincreasing | mixed


@dataclass(frozen=True)
class TrajectorySummary:
    nodes: dict[str, NodeSummary]
    settled: bool
    overflow_step: int | None

    def lines(self) -> list[str]:
        out = []
        for node_id, s in self.nodes.items():
            out.append(
                f"{node_id}: peak |{s.peak:.6g}| at t={s.peak_step}, "
                f"final {s.final if not isinstance(s.final, tuple) else list(s.final)}, "
                f"{'settled' if s.settled else 'not settled'}, {s.monotonicity}"
            )
        if self.overflow_step is not None:
            out.append(f"overflow at t={self.overflow_step}")
        return out


def _monotonicity(series: np.ndarray) -> str:
    diffs = np.diff(series)
    if np.all(diffs == 0):
        return "constant"
    if np.all(diffs >= 0):
        return "nondecreasing"
    if np.all(diffs <= 0):
        return "nonincreasing"
    return "mixed"


def summarize(trajectory: Trajectory) -> TrajectorySummary:
    """Per-node peak, final value, settled flag, and monotonicity class over
    the accumulated-value series."""
    nodes: dict[str, NodeSummary] = {}
    overflowed = trajectory.overflow_step is not None
    for node in trajectory.scenario.graph.nodes:
        levels = trajectory.levels(node.id)  # (steps, dim)
        magnitudes = np.max(np.abs(levels), axis=1)
        peak_step = int(np.argmax(magnitudes))
        final_vec = levels[-1]
        settled = (
            not overflowed
            and len(levels) >= 2
            and float(np.max(np.abs(levels[-1] - levels[-2]))) < SETTLE_TOL
        )
        series = levels[:, 0] if node.dim == 1 else magnitudes
        nodes[node.id] = NodeSummary(
            node_id=node.id,
            peak=float(magnitudes[peak_step]),
            peak_step=peak_step,
            final=float(final_vec[0]) if node.dim == 1 else tuple(final_vec),
            settled=settled,
            monotonicity=_monotonicity(series),
        )
    return TrajectorySummary(
        nodes,
        settled=all(s.settled for s in nodes.values()),
        overflow_step=trajectory.overflow_step,
    )


# ---------------------------------------------------------------------------
# bundled case study
# ---------------------------------------------------------------------------

CASE_STUDY_WEIGHTS = (0.15, 0.07, 0.80, 0.90)
CASE_STUDY_SHOCK = 0.20
CASE_STUDY_HORIZON = 10


def build_case_study() -> tuple[Graph, Scenario]:
    """The 1024-GPU training-cluster chain: grid carbon intensity ->
    facility overhead (PUE) -> accelerator efficiency -> token throughput
    -> cost per 1,000 tokens, with linear sensitivities 0.15, 0.07, 0.80,
    0.90 between relative deviations.

    The default scenario applies a +0.20 impulse (a 20% carbon-intensity
    spike) to the grid node at t=0 over a 10-step horizon.
    """
    dimensionless = Unit()
    nodes = [
        NodeSpec("ci", Cell(1, 1), unit=dimensionless, metric_id="ci"),
        NodeSpec("pue", Cell(2, 1), unit=dimensionless, metric_id="pue"),
        NodeSpec("flops_per_watt", Cell(3, 2), unit=dimensionless,
                 metric_id="flops_per_watt"),
        NodeSpec("tokens_per_s", Cell(5, 2), unit=dimensionless,
                 metric_id="tokens_per_second"),
        NodeSpec("cost_per_1k_tokens", Cell(6, 3), unit=dimensionless,
                 metric_id="cost_per_token"),
    ]
    chain = ["ci", "pue", "flops_per_watt", "tokens_per_s", "cost_per_1k_tokens"]
    edges = [
        EdgeSpec(src, dst, Linear(alpha))
        for src, dst, alpha in zip(chain, chain[1:], CASE_STUDY_WEIGHTS)
    ]
    graph = Graph(nodes, edges)
    scenario = Scenario(
        graph,
        CASE_STUDY_HORIZON,
        ShockSchedule((ShockEntry.of(0, "ci", CASE_STUDY_SHOCK),)),
        seed=0,
    )
    return graph, scenario
