"""mpglab: metric propagation graphs and a metric-formula catalog for
AI-infrastructure economics.

The package couples a 6x3 taxonomy of infrastructure metrics (six stack
layers by three semantic domains) with a dictionary of ~120 unit-checked
metric formulas, cluster-topology computations, and a propagation-graph
engine for tracing how deviations travel from the electric grid up to
cost per token.
"""

from .analysis import (
    AmplificationResult,
    CompositeOperator,
    LeverageScore,
    NodeScore,
    SpectralResult,
    StabilityResult,
    amplification_factor,
    compose_path,
    find_bottlenecks,
    find_leverage_points,
    spectral_radius,
    stability_classification,
    synthesize_composite_metric,
)
from .builtin import builtin_catalog, builtin_catalog_document
from .catalog import (
    Bindings,
    Catalog,
    Direction,
    MetricDef,
    MetricValue,
    RangeSpec,
    Verdict,
    check_range,
    evaluate,
    load_catalog,
)
from .cli import emit_trajectory_csv, main
from .documents import (
    graph_from_document,
    graph_to_document,
    parse_graph_document,
    scenario_from_document,
    scenario_to_document,
)
from .errors import MpglabError
from .finance import CashflowSpec, cashflows, discounted_sum, levelized_cost, marginal
from .graph import (
    AggregationSpec,
    EdgeSpec,
    Graph,
    GraphValidationReport,
    NodeSpec,
    PropagationMatrix,
    State,
    initial_state,
    linearize,
    step,
    validate_graph,
)
from .operators import (
    Delayed,
    Linear,
    Multiplicative,
    NormalNoise,
    OperatorSpec,
    Stochastic,
    Threshold,
    UniformNoise,
    apply_operator,
)
from .scenario import (
    Scenario,
    ShockEntry,
    ShockSchedule,
    Trajectory,
    build_case_study,
    perturbation_response,
    run,
    summarize,
)
from .taxonomy import (
    Cell,
    cell_from_index,
    cell_index,
    validate_cell,
    validate_unique_assignment,
)
from .topology import (
    ClusterTopology,
    balanced_bisection_bandwidth,
    interconnect_bisection_bandwidth,
    network_diameter,
    oversubscription_ratio,
    parse_topology_document,
)
from .units import Dimension, Quantity, Unit, parse_quantity, parse_unit, q

__version__ = "0.1.0"
