"""The built-in metric catalog.

One entry per metric row of the unified dictionary: grid and sustainability
measures, the facility xUE family, compute/network/ML-execution efficiency
ratios, service reliability indicators, and the full lifecycle-cost (TCO)
series.  Entries are expressed as a "catalog-v1" document and loaded through
the ordinary catalog loader, so the built-in data exercises exactly the same
parsing and dimension-checking path as user documents.

Conventions
-----------
* Variables keep their conventional symbols (E_total, SLO, lambda_fail...).
* Counts that are not tracked species (racks, GPUs, steps, checkpoints,
  failures) are dimensionless; tokens/ops/inferences/FLOPs/bits never mix.
* Metrics published only as measured quantities (all-reduce latency, failure
  rates vs. temperature) are identity forms over one measured input, with a
  note saying so.
* Rows whose printed source formula is garbled carry a note flagging the
  reconstruction (energy arbitrage spread, token throughput per watt).
* Discounted metrics use the 1/(1+r)^t convention throughout, including the
  rows whose source text abbreviates the factor.
"""

from __future__ import annotations

from .catalog import Catalog, load_catalog

# Appendix-style bottleneck groupings used as tags.
TAG_FACILITY = "power-cooling-facility"
TAG_INTERCONNECT = "interconnect"
TAG_COMPUTE = "compute-memory"
TAG_PIPELINE = "data-pipeline"
TAG_ECONOMICS = "economics-reliability"


def _m(id, name, layer, domain, unit, inputs=None, formula=None, builtin=None,
       direction="contextual", range=None, tags=(), note=""):
    entry = {
        "id": id,
        "name": name,
        "layer": layer,
        "domain": domain,
        "unit": unit,
        "direction": direction,
    }
    if inputs:
        entry["inputs"] = inputs
    if formula is not None:
        entry["formula"] = formula
    if builtin is not None:
        entry["builtin"] = builtin
    if range is not None:
        entry["range"] = range
    if tags:
        entry["tags"] = list(tags)
    if note:
        entry["note"] = note
    return entry


_NONNEG = {"lo": 0, "lo_hard": True}
_NONNEG_SOFT = {"lo": 0, "lo_hard": False}
_UNIT_INTERVAL = {"lo": 0, "lo_hard": True, "hi": 1, "hi_hard": True}


def _grid_metrics():
    return [
        # -- Layer 1, Domain 1: physical grid state --
        _m("mef", "Marginal Emissions Factor", 1, 1, "kgCO2e/kWh",
           inputs={"delta_emissions": "kgCO2e", "delta_load": "kWh"},
           formula="delta_emissions / delta_load",
           direction="lower-better", range=_NONNEG_SOFT,
           note="Emissions change per unit load change; may dip below zero "
                "when marginal generation displaces storage or exports."),
        _m("ci", "Grid Carbon Intensity", 1, 1, "kgCO2e/kWh",
           inputs={"e_co2_rate": "kgCO2e/h", "p_grid": "kW"},
           formula="e_co2_rate / p_grid",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_FACILITY]),
        _m("ra", "Renewable Availability", 1, 1, "",
           inputs={"p_renewable": "kW", "p_total": "kW"},
           formula="p_renewable / p_total",
           direction="higher-better", range=_UNIT_INTERVAL),
        # -- Layer 1, Domain 2: grid-constrained workload flexibility --
        _m("swf", "Shiftable Workload Fraction", 1, 2, "",
           inputs={"w_shiftable": "op", "w_total": "op"},
           formula="w_shiftable / w_total",
           direction="higher-better", range=_UNIT_INTERVAL),
        _m("erp", "Emissions-Reduction Potential", 1, 2, "",
           inputs={"e_baseline": "kgCO2e", "e_cas": "kgCO2e"},
           formula="(e_baseline - e_cas) / e_baseline",
           direction="higher-better",
           range={"lo": 0, "lo_hard": False, "hi": 1, "hi_hard": True},
           note="Negative values mean carbon-aware scheduling made things worse."),
        _m("wf", "Workload Flexibility Under Grid Conditions", 1, 2, "",
           inputs={"w_flexible": "op", "w_total": "op"},
           formula="w_flexible / w_total",
           direction="higher-better", range=_UNIT_INTERVAL),
        # -- Layer 1, Domain 3: grid economics --
        _m("lmp", "Time-Varying Electricity Price", 1, 3, "USD/MWh",
           inputs={"lambda_lmp": "USD/MWh"},
           formula="lambda_lmp",
           direction="lower-better", range=_NONNEG_SOFT,
           note="Measured locational marginal price; negative prices occur "
                "in congested renewable-heavy intervals."),
        _m("cpe", "Carbon Pricing Exposure", 1, 3, "USD/kWh",
           inputs={"ci": "kgCO2e/kWh", "carbon_price": "USD/kgCO2e"},
           formula="ci * carbon_price",
           direction="lower-better", range=_NONNEG),
        _m("carbon_cost_per_token", "Carbon Cost per Token", 1, 3, "USD/token",
           inputs={"carbon_per_token": "kgCO2e/token",
                   "carbon_price": "USD/kgCO2e"},
           formula="carbon_per_token * carbon_price",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_ECONOMICS]),
        _m("arbitrage_potential", "Location-Based Energy Arbitrage Potential",
           1, 3, "USD/MWh",
           inputs={"price_region_a": "USD/MWh", "price_region_b": "USD/MWh"},
           formula="max(price_region_a, price_region_b) "
                   "- min(price_region_a, price_region_b)",
           direction="higher-better", range=_NONNEG,
           note="Source formula is truncated (max over a single index); "
                "encoded as the regional price spread per its prose reading."),
        _m("grid_interaction_cost", "Grid Interaction Cost", 1, 3, "USD",
           inputs={"c_energy": "USD", "c_demand": "USD", "c_carbon": "USD",
                   "c_dr_penalties": "USD"},
           formula="c_energy + c_demand + c_carbon + c_dr_penalties",
           direction="lower-better", range=_NONNEG_SOFT,
           note="Demand-response revenue may be folded in as negative penalties."),
    ]


def _facility_metrics():
    return [
        # -- Layer 2, Domain 1: facility physical efficiency --
        _m("gpr", "GPUs per Rack", 2, 1, "",
           inputs={"n_gpu": "", "n_racks": ""},
           formula="n_gpu / n_racks",
           direction="contextual", range=_NONNEG,
           tags=[TAG_FACILITY]),
        _m("rpd", "Rack Power Density", 2, 1, "kW",
           inputs={"p_rack": "kW", "n_racks": ""},
           formula="p_rack / n_racks",
           direction="contextual", range=_NONNEG,
           tags=[TAG_FACILITY],
           note="Power envelope per rack; the floor-area variant needs an "
                "area base unit and is out of scope."),
        _m("carbon_price_exposure", "Carbon Price Exposure", 2, 1, "USD/kWh",
           inputs={"cue": "kgCO2e/kWh", "carbon_price": "USD/kgCO2e"},
           formula="cue * carbon_price",
           direction="lower-better", range=_NONNEG),
        _m("cop", "Cooling System Coefficient of Performance", 2, 1, "",
           inputs={"q_cooling": "kWh", "p_input": "kWh"},
           formula="q_cooling / p_input",
           direction="higher-better", range=_NONNEG,
           tags=[TAG_FACILITY]),
        _m("cpf", "Cooling Power Fraction", 2, 1, "",
           inputs={"p_cooling": "kW", "p_facility": "kW"},
           formula="p_cooling / p_facility",
           direction="lower-better", range=_UNIT_INTERVAL),
        _m("tdm", "Thermal Design Margin", 2, 1, "K",
           inputs={"t_throttle": "K", "t_supply": "K"},
           formula="t_throttle - t_supply",
           direction="higher-better",
           tags=[TAG_COMPUTE],
           note="Negative margin means the cooling supply already exceeds "
                "the throttling threshold."),
        # xUE family (facility physical efficiency ratios)
        _m("pue", "Power Usage Effectiveness", 2, 1, "",
           inputs={"E_total": "kWh", "E_IT": "kWh"},
           formula="E_total / E_IT",
           direction="lower-better",
           range={"lo": 1, "lo_hard": False},
           tags=[TAG_FACILITY],
           note="Lower bound is soft: sub-unity values are physically real "
                "under on-site energy harvesting."),
        _m("dcie", "Data Center Infrastructure Efficiency", 2, 1, "",
           inputs={"E_total": "kWh", "E_IT": "kWh"},
           formula="E_IT / E_total",
           direction="higher-better",
           range={"lo": 0, "lo_hard": True, "lo_exclusive": True,
                  "hi": 1, "hi_hard": False},
           note="Reciprocal of the total/IT energy ratio; upper bound soft "
                "for the same energy-harvesting reason its reciprocal's "
                "lower bound is."),
        _m("wue", "Water Usage Effectiveness", 2, 1, "L/kWh",
           inputs={"v_water": "L", "E_IT": "kWh"},
           formula="v_water / E_IT",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_FACILITY]),
        _m("cue", "Carbon Usage Effectiveness", 2, 1, "kgCO2e/kWh",
           inputs={"PUE": "", "CEF": "kgCO2e/kWh"},
           formula="PUE * CEF",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_FACILITY],
           note="Product form over facility overhead and the grid emission "
                "factor; equals total CO2e over IT energy."),
        _m("ere", "Energy Reuse Effectiveness", 2, 1, "",
           inputs={"ERF": "", "PUE": ""},
           formula="(1 - ERF) * PUE",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_FACILITY],
           note="Reuse-adjusted overhead; never exceeds the unadjusted ratio "
                "for reuse fractions in [0, 1]."),
        # -- Layer 2, Domain 2: facility effects on workloads --
        _m("lpf", "Latency Penalty During Facility Events", 2, 2, "",
           inputs={"l_event": "ms", "l_nominal": "ms"},
           formula="(l_event - l_nominal) / l_nominal",
           direction="lower-better", range=_NONNEG_SOFT),
        _m("tdf", "Throughput Degradation Factor", 2, 2, "",
           inputs={"thr_nominal": "token/s", "thr_event": "token/s"},
           formula="(thr_nominal - thr_event) / thr_nominal",
           direction="lower-better",
           range={"lo": 0, "lo_hard": False, "hi": 1, "hi_hard": True}),
        _m("ttdc", "Thermal-Throttling Duty Cycle", 2, 2, "",
           inputs={"t_throttled": "h", "t_total": "h"},
           formula="t_throttled / t_total",
           direction="lower-better", range=_UNIT_INTERVAL),
        _m("wcr", "Workload Curtailment Ratio", 2, 2, "",
           inputs={"w_curtailed": "op", "w_scheduled": "op"},
           formula="w_curtailed / w_scheduled",
           direction="lower-better", range=_UNIT_INTERVAL),
        _m("ftc", "Facility-to-Compute Thermal Coupling", 2, 2, "",
           inputs={"delta_t_chip": "K", "delta_t_supply": "K"},
           formula="delta_t_chip / delta_t_supply",
           direction="lower-better", range=_NONNEG_SOFT,
           note="Discrete form of the chip-vs-supply temperature sensitivity."),
        # -- Layer 2, Domain 3: facility economics --
        _m("eos", "Energy Opex Share", 2, 3, "",
           inputs={"c_energy": "USD", "c_total_opex": "USD"},
           formula="c_energy / c_total_opex",
           direction="lower-better", range=_UNIT_INTERVAL),
        _m("cos", "Cooling Opex Share", 2, 3, "",
           inputs={"c_cooling": "USD", "c_total_opex": "USD"},
           formula="c_cooling / c_total_opex",
           direction="lower-better", range=_UNIT_INTERVAL),
        _m("drp", "Demand-Response Revenue Potential", 2, 3, "USD",
           inputs={"incentive_rate": "USD/kWh", "delta_load": "kWh"},
           formula="incentive_rate * delta_load",
           direction="higher-better", range=_NONNEG,
           note="Single-event form; sum over events externally for a program "
                "total."),
        _m("carbon_cost", "Carbon Cost", 2, 3, "USD/kWh",
           inputs={"cue": "kgCO2e/kWh", "carbon_price": "USD/kgCO2e"},
           formula="cue * carbon_price",
           direction="lower-better", range=_NONNEG),
        _m("downtime_cost", "Reliability Downtime Cost", 2, 3, "USD/year",
           inputs={"failure_rate": "year^-1", "l_downtime": "USD"},
           formula="failure_rate * l_downtime",
           direction="lower-better", range=_NONNEG),
    ]


def _compute_metrics():
    return [
        # -- Layer 3, Domain 1: device physical behavior --
        _m("device_power", "Device Power Draw", 3, 1, "kW",
           inputs={"p_measured": "kW"},
           formula="p_measured",
           direction="lower-better", range=_NONNEG,
           note="Measured draw; the volts-times-amps form needs electrical "
                "base units and is recorded as a measured input."),
        _m("hbm_bpw", "HBM Bandwidth per Watt", 3, 1, "Gb/J",
           inputs={"bw_hbm": "Gb/s", "p_memory": "W"},
           formula="bw_hbm / p_memory",
           direction="higher-better", range=_NONNEG,
           tags=[TAG_COMPUTE]),
        _m("tpc", "Temperature-Performance Coupling", 3, 1, "TFLOP/s/K",
           inputs={"delta_perf": "TFLOP/s", "delta_t_chip": "K"},
           formula="delta_perf / delta_t_chip",
           direction="contextual",
           note="Discrete sensitivity of throughput to die temperature; "
                "negative values capture throttling."),
        _m("thermal_headroom", "Thermal Headroom", 3, 1, "K",
           inputs={"t_throttle": "K", "t_chip": "K"},
           formula="t_throttle - t_chip",
           direction="higher-better"),
        _m("vfs_efficiency", "Voltage-Frequency Scaling Efficiency", 3, 1,
           "GFLOP/J",
           inputs={"perf_at_f": "TFLOP/s", "power_at_f": "kW"},
           formula="perf_at_f / power_at_f",
           direction="higher-better", range=_NONNEG,
           note="Evaluated at one operating frequency; sweep externally for "
                "the full DVFS curve."),
        _m("ipf", "Idle Power Fraction", 3, 1, "",
           inputs={"p_idle": "kW", "p_tdp": "kW"},
           formula="p_idle / p_tdp",
           direction="lower-better",
           range={"lo": 0, "lo_hard": True, "hi": 1, "hi_hard": False}),
        # -- Layer 3, Domain 2: compute efficiency --
        _m("flops_per_watt", "FLOPs per Watt", 3, 2, "GFLOP/J",
           inputs={"flop_rate": "TFLOP/s", "power": "kW"},
           formula="flop_rate / power",
           direction="higher-better", range=_NONNEG),
        _m("energy_per_op", "Joules per Operation", 3, 2, "J/op",
           inputs={"e_total": "kWh", "n_operations": "Gop"},
           formula="e_total / n_operations",
           direction="lower-better", range=_NONNEG),
        _m("accelerator_utilization", "Accelerator Utilization", 3, 2, "",
           inputs={"t_active": "h", "t_total": "h"},
           formula="t_active / t_total",
           direction="higher-better", range=_UNIT_INTERVAL),
        _m("tokens_per_joule", "Tokens per Joule", 3, 2, "token/J",
           inputs={"tokens_processed": "token", "energy": "kWh"},
           formula="tokens_processed / energy",
           direction="higher-better", range=_NONNEG),
        _m("mbu", "Memory Bandwidth Utilization", 3, 2, "",
           inputs={"b_used": "Gb/s", "b_peak": "Gb/s"},
           formula="b_used / b_peak",
           direction="higher-better", range=_UNIT_INTERVAL),
        # -- Layer 3, Domain 3: hardware economics --
        _m("tco_hw", "Hardware TCO Contribution", 3, 3, "USD",
           builtin="discounted-sum",
           direction="lower-better", range=_NONNEG,
           note="Capex flow at period 0 plus discounted opex flows; the "
                "source prints a bare rate in the discount factor where the "
                "standard (1+r)^t is meant."),
        _m("mps", "Memory Power Share", 3, 3, "",
           inputs={"p_memory": "kW", "p_system": "kW"},
           formula="p_memory / p_system",
           direction="lower-better", range=_UNIT_INTERVAL,
           tags=[TAG_COMPUTE]),
        _m("depreciation_value", "Depreciated Hardware Value", 3, 3, "USD",
           inputs={"v0": "USD", "d": "", "t": ""},
           formula="v0 * (1 - d)^t",
           direction="contextual", range=_NONNEG,
           note="Geometric depreciation after t periods at rate d."),
        _m("cost_per_accelerator_hour", "Cost per Accelerator-Hour", 3, 3,
           "USD/h",
           inputs={"c_capex": "USD", "life_years": "", "c_opex_annual": "USD",
                   "hours_annual": "h"},
           formula="(c_capex / life_years + c_opex_annual) / hours_annual",
           direction="lower-better", range=_NONNEG,
           note="life_years counts amortization periods; c_opex_annual is "
                "the per-period operating spend."),
        _m("replacement_cost", "Failure-Driven Replacement Cost", 3, 3,
           "USD/year",
           inputs={"failure_rate": "year^-1", "c_unit": "USD"},
           formula="failure_rate * c_unit",
           direction="lower-better", range=_NONNEG),
        _m("hle", "Hardware Lifetime Efficiency", 3, 3, "PFLOP/USD",
           inputs={"compute_output": "PFLOP", "lifetime_cost": "USD"},
           formula="compute_output / lifetime_cost",
           direction="higher-better", range=_NONNEG),
    ]


def _network_metrics():
    return [
        # -- Layer 4, Domain 1: interconnect physical overhead --
        _m("npo", "Network Power Overhead", 4, 1, "kW",
           inputs={"p_switches": "kW", "p_nics": "kW", "p_optics": "kW"},
           formula="p_switches + p_nics + p_optics",
           direction="lower-better", range=_NONNEG),
        _m("slpr", "Switch Load Power Ratio", 4, 1, "",
           inputs={"p_switch": "kW", "p_rack": "kW"},
           formula="p_switch / p_rack",
           direction="lower-better", range=_UNIT_INTERVAL),
        _m("net_thermal_share", "Rack/Pod Thermal Load from Networking", 4, 1, "",
           inputs={"p_network": "kW", "p_total": "kW"},
           formula="p_network / p_total",
           direction="lower-better", range=_UNIT_INTERVAL),
        _m("energy_per_bit", "Interconnect Energy per Bit", 4, 1, "J/Gb",
           inputs={"e_network": "kWh", "bits_transmitted": "Gb"},
           formula="e_network / bits_transmitted",
           direction="lower-better", range=_NONNEG),
        # -- Layer 4, Domain 2: interconnect workload efficiency --
        _m("pipeline_efficiency", "Pipeline Efficiency", 4, 2, "",
           inputs={"t_ideal": "h", "t_actual": "h"},
           formula="t_ideal / t_actual",
           direction="higher-better", range=_UNIT_INTERVAL),
        _m("bandwidth_per_watt", "Bandwidth per Watt", 4, 2, "Gb/J",
           inputs={"bandwidth": "Gb/s", "p_network": "kW"},
           formula="bandwidth / p_network",
           direction="higher-better", range=_NONNEG),
        _m("arl", "All-Reduce Latency", 4, 2, "ms",
           inputs={"l_collective": "ms"},
           formula="l_collective",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_INTERCONNECT],
           note="Measured collective latency; depends on topology, message "
                "size, and congestion, so no closed form is imposed."),
        _m("congestion_penalty", "Congestion Penalty", 4, 2, "",
           inputs={"l_p99": "ms", "l_p50": "ms"},
           formula="(l_p99 - l_p50) / l_p50",
           direction="lower-better", range=_NONNEG),
        _m("ttl_loss", "Topology-Induced Throughput Loss", 4, 2, "",
           inputs={"thr_observed": "op/s", "thr_full_bisection": "op/s"},
           formula="1 - thr_observed / thr_full_bisection",
           direction="lower-better", range=_UNIT_INTERVAL,
           tags=[TAG_INTERCONNECT]),
        _m("ebu", "Effective Bandwidth Utilization", 4, 2, "",
           inputs={"b_useful": "Gb/s", "b_peak": "Gb/s"},
           formula="b_useful / b_peak",
           direction="higher-better", range=_UNIT_INTERVAL),
        # -- Layer 4, Domain 3: interconnect economics --
        _m("interconnect_capex", "Interconnect CapEx Contribution", 4, 3, "USD",
           inputs={"c_switches": "USD", "c_optics": "USD", "c_nics": "USD"},
           formula="c_switches + c_optics + c_nics",
           direction="lower-better", range=_NONNEG),
        _m("network_scaling_cost", "Network Scaling Cost", 4, 3, "USD",
           inputs={"c_scale": "USD"},
           formula="c_scale",
           direction="lower-better", range=_NONNEG,
           note="Measured or externally modeled; depends on node count, "
                "fabric class, and oversubscription, so no closed form is "
                "imposed."),
        _m("tdl", "Topology-Driven Efficiency Loss", 4, 3, "",
           inputs={"thr_ideal": "op/s", "thr_topology": "op/s"},
           formula="(thr_ideal - thr_topology) / thr_ideal",
           direction="lower-better", range=_UNIT_INTERVAL),
        _m("network_failure_rate", "Network Failure Rate", 4, 3, "year^-1",
           inputs={"n_failures": "", "period": "year"},
           formula="n_failures / period",
           direction="lower-better", range=_NONNEG),
        _m("network_reliability_cost", "Network Reliability Cost", 4, 3,
           "USD/year",
           inputs={"failure_rate": "year^-1", "l_event": "USD"},
           formula="failure_rate * l_event",
           direction="lower-better", range=_NONNEG),
    ]


def _execution_metrics():
    return [
        # -- Layer 5, Domain 1: physical stress on execution --
        _m("thermal_failure_rate", "Thermal-Induced Failure Rate", 5, 1,
           "year^-1",
           inputs={"lambda_thermal": "year^-1"},
           formula="lambda_thermal",
           direction="lower-better", range=_NONNEG,
           note="Measured rate; Arrhenius-style temperature models stay "
                "outside the catalog."),
        _m("pq_failure_rate", "Power-Quality-Induced Failure Rate", 5, 1,
           "year^-1",
           inputs={"lambda_pq": "year^-1"},
           formula="lambda_pq",
           direction="lower-better", range=_NONNEG,
           note="Measured rate over sags, harmonics, and transients."),
        _m("ceo", "Compiler-Induced Energy Overhead", 5, 1, "",
           inputs={"e_compiled": "kWh", "e_ideal": "kWh"},
           formula="(e_compiled - e_ideal) / e_ideal",
           direction="lower-better", range=_NONNEG_SOFT,
           note="The ideal baseline is itself an estimate, so slightly "
                "negative values are tolerated."),
        _m("idle_energy", "Idle Energy from Inefficient Scheduling", 5, 1,
           "kWh",
           inputs={"p_idle": "kW", "t_idle": "h"},
           formula="p_idle * t_idle",
           direction="lower-better", range=_NONNEG),
        # -- Layer 5, Domain 2: workload execution efficiency --
        _m("ttt", "Time-to-Train", 5, 2, "h",
           inputs={"t_converged": "h", "t_start": "h"},
           formula="t_converged - t_start",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_COMPUTE]),
        _m("tps", "Benchmark Throughput", 5, 2, "inference/s",
           inputs={"total_queries": "inference", "t_window": "s"},
           formula="total_queries / t_window",
           direction="higher-better", range=_NONNEG),
        _m("dpsr", "Data Pipeline Stalling Rate", 5, 2, "",
           inputs={"stalled_steps": "", "total_steps": ""},
           formula="stalled_steps / total_steps",
           direction="lower-better", range=_UNIT_INTERVAL,
           tags=[TAG_PIPELINE]),
        _m("fragmentation_loss", "Job Packing Fragmentation Loss", 5, 2, "",
           inputs={"jpe": ""},
           formula="1 - jpe",
           direction="lower-better", range=_UNIT_INTERVAL,
           note="Complement of job packing efficiency: utilization lost to "
                "orchestration geometry."),
        _m("mpe", "Effective Model Parallel Efficiency", 5, 2, "",
           inputs={"thr_achieved": "token/s", "thr_ideal": "token/s"},
           formula="thr_achieved / thr_ideal",
           direction="higher-better", range=_UNIT_INTERVAL),
        _m("tokens_per_second", "Tokens per Second", 5, 2, "token/s",
           inputs={"tokens": "token", "t": "s"},
           formula="tokens / t",
           direction="higher-better", range=_NONNEG),
        _m("io_per_step", "Storage I/O Throughput per Training Step", 5, 2,
           "GB",
           inputs={"v_io": "GB", "n_steps": ""},
           formula="v_io / n_steps",
           direction="contextual", range=_NONNEG,
           tags=[TAG_PIPELINE]),
        _m("ppe", "Pipeline Parallelism Efficiency", 5, 2, "",
           inputs={"t_ideal": "h", "t_pipeline": "h"},
           formula="t_ideal / t_pipeline",
           direction="higher-better", range=_UNIT_INTERVAL),
        _m("epc", "Energy per Checkpoint", 5, 2, "kWh",
           inputs={"e_checkpoint": "kWh", "n_checkpoints": ""},
           formula="e_checkpoint / n_checkpoints",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_COMPUTE]),
        # -- Layer 5, Domain 3: execution economics --
        _m("cost_per_step", "Cost per Training Step", 5, 3, "USD",
           inputs={"c_total": "USD", "n_steps": ""},
           formula="c_total / n_steps",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_ECONOMICS]),
        _m("cost_per_token", "Cost per Token", 5, 3, "USD/token",
           inputs={"c_inference": "USD", "n_tokens": "token"},
           formula="c_inference / n_tokens",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_ECONOMICS]),
        _m("msc", "Marginal Serving Cost", 5, 3, "USD/token",
           inputs={"delta_c": "USD", "delta_q": "token"},
           formula="delta_c / delta_q",
           direction="lower-better", range=_NONNEG_SOFT,
           note="Discrete form of the cost slope; use the functional "
                "marginal evaluator for a model-based derivative."),
        _m("aso", "Autoscaling Overhead", 5, 3, "",
           inputs={"c_autoscale": "USD", "c_ideal": "USD"},
           formula="(c_autoscale - c_ideal) / c_ideal",
           direction="lower-better", range=_NONNEG_SOFT),
        _m("instability_loss", "Expected Loss from Training Instability", 5, 3,
           "USD",
           inputs={"p_diverge": "", "c_restart": "USD"},
           formula="p_diverge * c_restart",
           direction="lower-better", range=_NONNEG),
    ]


def _service_metrics():
    return [
        # -- Layer 6, Domain 1: service-layer physical overhead --
        _m("ale", "Annual Loss Expectancy from Failures", 6, 1, "USD/year",
           inputs={"failure_rate": "year^-1", "l_event": "USD"},
           formula="failure_rate * l_event",
           direction="lower-better", range=_NONNEG),
        _m("reo", "Redundancy Energy Overhead", 6, 1, "",
           inputs={"p_redundant": "kW", "p_total": "kW"},
           formula="p_redundant / p_total",
           direction="lower-better", range=_UNIT_INTERVAL),
        _m("deo", "Thermal Derating Energy Overhead", 6, 1, "",
           inputs={"e_derated": "kWh", "e_optimal": "kWh"},
           formula="(e_derated - e_optimal) / e_optimal",
           direction="lower-better", range=_NONNEG_SOFT),
        _m("seif", "Service Energy Inefficiency Factor", 6, 1, "",
           inputs={"e_service": "kWh", "e_compute": "kWh"},
           formula="e_service / e_compute",
           direction="lower-better", range=_NONNEG,
           note="Replication, retries, and other service-quality energy over "
                "the bare compute energy."),
        # -- Layer 6, Domain 2: service reliability --
        _m("tsi", "Thermal Stability Index", 6, 2, "",
           inputs={"t_max": "K", "t_service": "K", "t_nominal": "K"},
           formula="(t_max - t_service) / (t_max - t_nominal)",
           direction="higher-better",
           range={"lo": 0, "lo_hard": False, "hi": 1, "hi_hard": False}),
        _m("sli", "Service Level Indicator", 6, 2, "",
           inputs={"successful": "inference", "total": "inference"},
           formula="successful / total",
           direction="higher-better", range=_UNIT_INTERVAL),
        _m("availability", "Availability", 6, 2, "",
           inputs={"uptime": "h", "downtime": "h"},
           formula="uptime / (uptime + downtime)",
           direction="higher-better", range=_UNIT_INTERVAL),
        _m("slo_violation_rate", "SLO Violation Rate", 6, 2, "",
           inputs={"violations": "inference", "total": "inference"},
           formula="violations / total",
           direction="lower-better", range=_UNIT_INTERVAL),
        _m("ebc", "Error Budget Consumption", 6, 2, "",
           inputs={"SLO": "", "SLI": ""},
           formula="(SLO - SLI) / (1 - SLO)",
           direction="lower-better",
           range={"hi": 1, "hi_hard": False},
           tags=[TAG_ECONOMICS],
           note="Negative when the indicator beats its objective; above one "
                "the budget is exhausted."),
        _m("mtbf", "Mean Time Between Failures", 6, 2, "h",
           inputs={"t_operating": "h", "n_failures": ""},
           formula="t_operating / n_failures",
           direction="higher-better", range=_NONNEG,
           tags=[TAG_ECONOMICS]),
        _m("mttr", "Mean Time to Recovery", 6, 2, "h",
           inputs={"t_repair_total": "h", "n_failures": ""},
           formula="t_repair_total / n_failures",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_ECONOMICS]),
        # -- Layer 6, Domain 3: service economics --
        _m("qcr", "QoS Compliance Rate", 6, 3, "",
           inputs={"t_violated": "h", "t_total": "h"},
           formula="1 - t_violated / t_total",
           direction="higher-better", range=_UNIT_INTERVAL),
        _m("tsc", "Total Service Cost", 6, 3, "USD",
           inputs={"c_compute": "USD", "c_network": "USD", "c_energy": "USD",
                   "c_sre": "USD", "c_failures": "USD"},
           formula="c_compute + c_network + c_energy + c_sre + c_failures",
           direction="lower-better", range=_NONNEG),
        _m("osr", "GPU Interconnect Oversubscription Ratio", 6, 3, "",
           inputs={"gpu_aggregate_bw": "Gb/s", "switch_uplink_bw": "Gb/s"},
           formula="gpu_aggregate_bw / switch_uplink_bw",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_INTERCONNECT]),
        _m("sla_penalty_cost", "SLA Penalty Cost", 6, 3, "USD",
           inputs={"breach_hours": "h", "penalty_rate": "USD/h"},
           formula="breach_hours * penalty_rate",
           direction="lower-better", range=_NONNEG,
           note="Single-breach form; sum over incidents externally."),
        _m("cur", "Cluster Utilization Rate", 6, 3, "",
           inputs={"t_active_gpu": "h", "t_provisioned_gpu": "h"},
           formula="t_active_gpu / t_provisioned_gpu",
           direction="higher-better", range=_UNIT_INTERVAL),
        _m("tpw", "Token Throughput per Watt", 6, 3, "token/J",
           inputs={"tokens_processed": "token", "energy": "kWh"},
           formula="tokens_processed / energy",
           direction="higher-better", range=_NONNEG,
           note="The printed denominator mixes watts and operations; encoded "
                "as tokens per unit energy per its prose reading."),
        _m("ale_mismatch", "Expected Loss from MTBF/MTTR Mismatch", 6, 3,
           "USD/year",
           inputs={"failure_rate": "year^-1", "l_event": "USD"},
           formula="failure_rate * l_event",
           direction="lower-better", range=_NONNEG),
        _m("oce", "Operational Cost Elasticity", 6, 3, "USD/inference",
           inputs={"delta_c_service": "USD", "delta_q": "inference"},
           formula="delta_c_service / delta_q",
           direction="lower-better", range=_NONNEG_SOFT,
           note="Discrete form of the service-cost slope."),
        _m("slv", "Service Lifetime Value", 6, 3, "USD",
           builtin="discounted-sum",
           direction="higher-better",
           note="Discounted net (revenue minus cost) flows; the source "
                "prints a bare rate in the discount factor where the "
                "standard (1+r)^t is meant."),
    ]


def _tco_series():
    return [
        _m("tco", "Total Cost of Ownership", 6, 3, "USD",
           builtin="discounted-sum",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_ECONOMICS],
           note="Capex flow at period 0 plus discounted opex flows from "
                "period 1."),
        _m("tco_per_kw", "TCO per kW of IT Capacity", 6, 3, "USD/kW",
           inputs={"tco_value": "USD", "p_it_rated": "kW"},
           formula="tco_value / p_it_rated",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_ECONOMICS]),
        _m("tco_per_kwh", "TCO per kWh of Delivered Energy", 6, 3, "USD/kWh",
           inputs={"tco_value": "USD", "e_total_delivered": "kWh"},
           formula="tco_value / e_total_delivered",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_ECONOMICS]),
        _m("tco_per_rack", "TCO per Rack", 6, 3, "USD",
           inputs={"tco_value": "USD", "n_racks": ""},
           formula="tco_value / n_racks",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_ECONOMICS]),
        _m("tco_per_gpu_hour", "TCO per GPU-Hour", 6, 3, "USD/h",
           inputs={"tco_value": "USD", "h_gpu": "h"},
           formula="tco_value / h_gpu",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_ECONOMICS]),
        _m("tco_per_flops", "TCO per FLOPs", 6, 3, "USD/PFLOP",
           inputs={"tco_value": "USD", "f_total": "PFLOP"},
           formula="tco_value / f_total",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_ECONOMICS]),
        _m("tco_per_inference", "TCO per Inference", 6, 3, "USD/inference",
           inputs={"tco_value": "USD", "n_inf": "inference"},
           formula="tco_value / n_inf",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_ECONOMICS]),
        _m("true_tco", "True Total Cost of Ownership", 6, 3, "USD",
           builtin="discounted-sum",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_ECONOMICS],
           note="Facility, IT, energy, personnel, and indirect flows combined "
                "per period before discounting, from period 0."),
        _m("tcoe", "Total Cost of Energy", 6, 3, "USD",
           builtin="discounted-sum",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_ECONOMICS],
           note="Energy-related flows only, discounted from period 1."),
        _m("teco", "Total Environmental Cost of Ownership", 6, 3, "USD",
           inputs={"tco_value": "USD", "c_carbon": "USD", "c_water": "USD",
                   "c_other_env": "USD"},
           formula="tco_value + c_carbon + c_water + c_other_env",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_ECONOMICS]),
        _m("lcoe", "Levelized Cost of Energy", 6, 3, "USD/MWh",
           builtin="levelized",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_ECONOMICS],
           note="Discounted investment, O&M, and fuel flows over discounted "
                "generation; the source table prints the two discounted sums "
                "joined by a plus where the ratio is meant."),
        _m("lcoh", "Levelized Cost of Hydrogen", 6, 3, "USD/kgH2",
           builtin="levelized",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_ECONOMICS],
           note="Discounted production cost over discounted hydrogen output; "
                "same ratio reading as the electricity variant."),
        _m("lcoai", "Levelized Cost of AI", 6, 3, "USD/inference",
           builtin="levelized",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_ECONOMICS],
           note="Amortized capex plus discounted opex over valid output "
                "units; put all output in period 0 (or use rate 0) to match "
                "the undiscounted-denominator form."),
        _m("tlops", "Total Lifecycle Operations per Cost", 6, 3, "op/USD",
           builtin="levelized",
           direction="higher-better", range=_NONNEG,
           tags=[TAG_ECONOMICS],
           note="Operations delivered per lifecycle dollar: the levelized "
                "ratio with operations in the numerator."),
        _m("mtcof", "Marginal TCO of FLOPs", 6, 3, "USD/PFLOP",
           builtin="marginal",
           direction="lower-better", range=_NONNEG,
           tags=[TAG_ECONOMICS],
           note="Sensitivity of lifecycle cost to delivered compute; "
                "evaluate with the central-difference marginal over a cost "
                "model."),
    ]


def builtin_catalog_document() -> dict:
    """The built-in catalog as a catalog-v1 document."""
    return {
        "schema": "catalog-v1",
        "metrics": (
            _grid_metrics()
            + _facility_metrics()
            + _compute_metrics()
            + _network_metrics()
            + _execution_metrics()
            + _service_metrics()
            + _tco_series()
        ),
    }


_CACHE: Catalog | None = None


def builtin_catalog() -> Catalog:
    """Load (once) and return the built-in catalog."""
    global _CACHE
    if _CACHE is None:
        _CACHE = load_catalog(builtin_catalog_document())
    return _CACHE
