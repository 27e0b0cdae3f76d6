"""Metric dictionary: data-driven definitions with units-aware evaluation.

A Catalog is an immutable list of MetricDef entries loaded from a
"catalog-v1" document (JSON text or an equivalent dict).  Each entry either
carries a closed-form expression over declared inputs or names one of the
structurally special builtin kinds (discounted-sum, levelized, marginal)
evaluated through the finance module.

Dimension inference runs at load time: an expression entry whose formula
dimension disagrees with its declared unit is rejected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

from . import expressions as ex
from .errors import (
    CatalogError,
    DimensionError,
    DocumentError,
    EvaluationError,
    SchemaVersionError,
)
from .taxonomy import Cell, validate_cell
from .units import Quantity, Unit, parse_unit

CATALOG_SCHEMA = "catalog-v1"

BUILTIN_KINDS = ("discounted-sum", "levelized", "marginal")


class Direction(str, Enum):
    LOWER = "lower-better"
    HIGHER = "higher-better"
    CONTEXTUAL = "contextual"


class Verdict(str, Enum):
    OK = "ok"
    SOFT_WARNING = "soft-warning"
    HARD_VIOLATION = "hard-violation"


@dataclass(frozen=True)
class Bound:
    value: float
    hard: bool = True
    exclusive: bool = False

    def violated_low(self, x: float) -> bool:
        return x < self.value or (self.exclusive and x == self.value)

    def violated_high(self, x: float) -> bool:
        return x > self.value or (self.exclusive and x == self.value)


@dataclass(frozen=True)
class RangeSpec:
    """Interval constraint with per-bound hard/soft flags."""

    lo: Bound | None = None
    hi: Bound | None = None


@dataclass(frozen=True)
class MetricDef:
    id: str
    name: str
    cell: Cell
    unit: Unit
    inputs: dict[str, Unit] = field(default_factory=dict)
    formula: ex.Expr | None = None
    builtin: str | None = None
    direction: Direction = Direction.CONTEXTUAL
    range: RangeSpec = RangeSpec()
    tags: tuple[str, ...] = ()
    note: str = ""

    def __post_init__(self) -> None:
        if (self.formula is None) == (self.builtin is None):
            raise CatalogError(
                f"metric {self.id!r} needs exactly one of formula or builtin"
            )
        if self.builtin is not None and self.builtin not in BUILTIN_KINDS:
            raise CatalogError(
                f"metric {self.id!r}: unknown builtin kind {self.builtin!r}"
            )


@dataclass(frozen=True)
class MetricValue:
    metric_id: str
    value: float
    unit: Unit
    note: str = ""

    def quantity(self) -> Quantity:
        return Quantity(self.value, self.unit)


Bindings = Mapping[str, Quantity]


class Catalog:
    """Immutable metric dictionary with id lookup."""

    def __init__(self, entries: list[MetricDef]):
        self.entries: tuple[MetricDef, ...] = tuple(entries)
        self._by_id: dict[str, MetricDef] = {}
        for entry in self.entries:
            if entry.id in self._by_id:
                raise CatalogError(f"duplicate metric id {entry.id!r}")
            self._by_id[entry.id] = entry

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, metric_id: str) -> bool:
        return metric_id in self._by_id

    def get(self, metric_id: str) -> MetricDef:
        try:
            return self._by_id[metric_id]
        except KeyError:
            raise CatalogError(f"unknown metric id {metric_id!r}") from None

    def assignments(self):
        """(metric_id, Cell) pairs for the unique-assignment check."""
        for entry in self.entries:
            yield entry.id, entry.cell

    def ids(self) -> list[str]:
        return [e.id for e in self.entries]


def _parse_range(raw) -> RangeSpec:
    if raw is None:
        return RangeSpec()
    lo = hi = None
    if "lo" in raw and raw["lo"] is not None:
        lo = Bound(
            float(raw["lo"]),
            hard=bool(raw.get("lo_hard", True)),
            exclusive=bool(raw.get("lo_exclusive", False)),
        )
    if "hi" in raw and raw["hi"] is not None:
        hi = Bound(
            float(raw["hi"]),
            hard=bool(raw.get("hi_hard", True)),
            exclusive=bool(raw.get("hi_exclusive", False)),
        )
    return RangeSpec(lo, hi)


def _range_to_json(r: RangeSpec):
    if r.lo is None and r.hi is None:
        return None
    out = {}
    if r.lo is not None:
        out["lo"] = r.lo.value
        out["lo_hard"] = r.lo.hard
        if r.lo.exclusive:
            out["lo_exclusive"] = True
    if r.hi is not None:
        out["hi"] = r.hi.value
        out["hi_hard"] = r.hi.hard
        if r.hi.exclusive:
            out["hi_exclusive"] = True
    return out


def entry_from_json(raw: dict) -> MetricDef:
    try:
        mid = raw["id"]
        cell = validate_cell(raw["layer"], raw["domain"])
        unit = parse_unit(raw.get("unit", ""))
        inputs = {k: parse_unit(v) for k, v in raw.get("inputs", {}).items()}
        formula = None
        builtin = raw.get("builtin")
        if builtin is not None:
            if isinstance(builtin, dict):
                builtin = builtin.get("kind")
            builtin = str(builtin)
        if "formula" in raw and raw["formula"] is not None:
            formula = ex.from_json(raw["formula"])
        entry = MetricDef(
            id=str(mid),
            name=str(raw.get("name", mid)),
            cell=cell,
            unit=unit,
            inputs=inputs,
            formula=formula,
            builtin=builtin,
            direction=Direction(raw.get("direction", "contextual")),
            range=_parse_range(raw.get("range")),
            tags=tuple(raw.get("tags", ())),
            note=str(raw.get("note", "")),
        )
    except KeyError as exc:
        raise DocumentError(f"catalog entry missing field {exc}") from None
    except ValueError as exc:
        raise DocumentError(f"catalog entry {raw.get('id')!r}: {exc}") from None
    _check_entry_dimensions(entry)
    return entry


def entry_to_json(entry: MetricDef) -> dict:
    raw = {
        "id": entry.id,
        "name": entry.name,
        "layer": entry.cell.layer,
        "domain": entry.cell.domain,
        "unit": entry.unit.symbol,
        "direction": entry.direction.value,
    }
    if entry.inputs:
        raw["inputs"] = {k: u.symbol for k, u in entry.inputs.items()}
    if entry.formula is not None:
        raw["formula"] = ex.to_string(entry.formula)
    if entry.builtin is not None:
        raw["builtin"] = entry.builtin
    rng = _range_to_json(entry.range)
    if rng:
        raw["range"] = rng
    if entry.tags:
        raw["tags"] = list(entry.tags)
    if entry.note:
        raw["note"] = entry.note
    return raw


def _check_entry_dimensions(entry: MetricDef) -> None:
    """Formula dimension must equal the declared unit dimension, and every
    referenced variable must be a declared input.  Builtin entries defer the
    check to evaluation time (their dimension depends on the cashflows)."""
    if entry.formula is None:
        return
    refs = ex.variables(entry.formula)
    undeclared = refs - set(entry.inputs)
    if undeclared:
        raise DimensionError(
            f"metric {entry.id!r}: variables {sorted(undeclared)} are not declared inputs"
        )
    input_dims = {k: u.dimension for k, u in entry.inputs.items()}
    inferred = ex.infer_dimension(entry.formula, input_dims)
    if inferred != entry.unit.dimension:
        raise DimensionError(
            f"metric {entry.id!r}: formula dimension {inferred} does not match "
            f"declared unit {entry.unit} ({entry.unit.dimension})"
        )


def load_catalog(document) -> Catalog:
    """Load a catalog from JSON text or an already-parsed document dict.

    Every entry is dimension-checked on the way in.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise DocumentError(
                f"catalog parse failure at line {exc.lineno}, column {exc.colno}: "
                f"{exc.msg}"
            ) from None
    if not isinstance(document, dict):
        raise DocumentError("catalog document must be a JSON object")
    schema = document.get("schema")
    if schema != CATALOG_SCHEMA:
        raise SchemaVersionError(
            f"expected schema {CATALOG_SCHEMA!r}, got {schema!r}"
        )
    entries = [entry_from_json(raw) for raw in document.get("metrics", [])]
    return Catalog(entries)


def evaluate(catalog: Catalog, metric_id: str, bindings: Bindings) -> MetricValue:
    """Evaluate a closed-form metric over unit-tagged bindings.

    Bindings are converted into each declared input's unit before the formula
    runs; the result comes back in the metric's declared unit.  Builtin
    entries (discounted sums, levelized ratios, marginals) take structured
    cashflows, not scalar bindings — use the finance module for those.
    """
    entry = catalog.get(metric_id)
    if entry.formula is None:
        raise EvaluationError(
            f"metric {metric_id!r} is a {entry.builtin} builtin; evaluate it via "
            f"the finance module (discounted_sum / levelized_cost / marginal)"
        )
    env: dict[str, float] = {}
    for name, unit in entry.inputs.items():
        if name not in bindings:
            if name in ex.variables(entry.formula):
                raise EvaluationError(
                    f"metric {metric_id!r}: missing variable {name!r}"
                )
            continue
        quantity = bindings[name]
        if quantity.dimension != unit.dimension:
            raise DimensionError(
                f"metric {metric_id!r}: variable {name!r} expects {unit} "
                f"({unit.dimension}), got {quantity.unit} ({quantity.dimension})"
            )
        env[name] = quantity.canonical()
    value_canonical = ex.evaluate_expr(entry.formula, env)
    if value_canonical != value_canonical or value_canonical in (float("inf"), float("-inf")):
        raise EvaluationError(f"metric {metric_id!r} evaluated to a non-finite value")
    value = value_canonical / float(entry.unit.scale)
    return MetricValue(metric_id, value, entry.unit, entry.note)


def check_range(catalog: Catalog, metric_id: str, value) -> Verdict:
    """Classify a value against the metric's declared range.

    Accepts a MetricValue, Quantity, or bare float (assumed to be in the
    metric's declared unit).  Hard bounds yield hard-violation, soft bounds
    soft-warning.
    """
    entry = catalog.get(metric_id)
    if isinstance(value, MetricValue):
        x = value.quantity().to(entry.unit).value
    elif isinstance(value, Quantity):
        x = value.to(entry.unit).value
    else:
        x = float(value)
    verdict = Verdict.OK
    for bound, violated in (
        (entry.range.lo, lambda b: b.violated_low(x)),
        (entry.range.hi, lambda b: b.violated_high(x)),
    ):
        if bound is not None and violated(bound):
            if bound.hard:
                return Verdict.HARD_VIOLATION
            verdict = Verdict.SOFT_WARNING
    return verdict
