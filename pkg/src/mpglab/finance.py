"""Structurally special metric evaluators: discounted sums, levelized
ratios, and finite-difference marginals.

Discounting convention: factor 1/(1+r)^t over integer periods, so period-0
flows (the CAPEX convention) enter undiscounted.  Rates are per-period and
dimensionless; flows carry units and must all share one dimension.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

from .errors import (
    DimensionError,
    MpglabError,
    SingularOutputError,
    StepSizeError,
)
from .units import Quantity


@dataclass(frozen=True)
class Cashflow:
    t: int
    amount: Quantity


@dataclass(frozen=True)
class CashflowSpec:
    """A discount rate and a list of dated flows (period, amount)."""

    flows: tuple[Cashflow, ...]
    rate: float = 0.0

    def __post_init__(self) -> None:
        if self.rate <= -1.0:
            raise MpglabError(f"discount rate must exceed -1, got {self.rate}")
        for flow in self.flows:
            if flow.t < 0 or flow.t != int(flow.t):
                raise MpglabError(f"flow periods must be non-negative integers, got {flow.t}")


def cashflows(rate: float, flows: Mapping[int, Quantity] | list[tuple[int, Quantity]]) -> CashflowSpec:
    """Convenience constructor from {t: amount} or [(t, amount), ...]."""
    items = flows.items() if isinstance(flows, Mapping) else flows
    return CashflowSpec(tuple(Cashflow(int(t), a) for t, a in items), rate)


def discounted_sum(spec: CashflowSpec) -> Quantity:
    """Present value of the flows: sum of amount_t / (1+r)^t.

    All flows must share a dimension; the result is expressed in the first
    flow's unit.
    """
    if not spec.flows:
        raise MpglabError("cashflow spec has no flows")
    unit = spec.flows[0].amount.unit
    total = 0.0
    for flow in spec.flows:
        if flow.amount.dimension != unit.dimension:
            raise DimensionError(
                f"mixed flow dimensions: {flow.amount.unit} vs {unit}"
            )
        total += flow.amount.to(unit).value / (1.0 + spec.rate) ** flow.t
    return Quantity(total, unit)


def levelized_cost(costs: CashflowSpec, outputs: CashflowSpec) -> Quantity:
    """discounted_sum(costs) / discounted_sum(outputs).

    Covers the levelized family (cost of electricity, hydrogen, valid AI
    output) and the per-unit lifecycle-cost normalizations; the unit is
    cost unit / output unit.
    """
    cost = discounted_sum(costs)
    output = discounted_sum(outputs)
    if output.value == 0.0:
        raise SingularOutputError("discounted output sum is zero")
    return Quantity(cost.value / output.value, cost.unit / output.unit)


def marginal(
    metric: Callable[[Mapping[str, Quantity]], Quantity | float],
    at: Mapping[str, Quantity],
    wrt: str,
    h: float,
) -> Quantity:
    """Central-difference sensitivity of a metric to one named variable.

    (f(x+h) - f(x-h)) / (2h); exact for affine metrics up to the rounding of
    the two subtractions.  The step h is in the units of the bound variable.
    """
    if h <= 0:
        raise StepSizeError(f"step must be positive, got {h}")
    if wrt not in at:
        raise MpglabError(f"variable {wrt!r} is not bound")
    x = at[wrt]

    def shifted(delta: float) -> float:
        bindings = dict(at)
        bindings[wrt] = Quantity(x.value + delta, x.unit)
        result = metric(bindings)
        return result.value if isinstance(result, Quantity) else float(result)

    hi = shifted(+h)
    lo = shifted(-h)
    slope = (hi - lo) / (2.0 * h)
    sample = metric(at)
    f_unit = sample.unit if isinstance(sample, Quantity) else None
    if f_unit is not None:
        return Quantity(slope, f_unit / x.unit)
    return Quantity(slope, Quantity(0.0).unit / x.unit)
