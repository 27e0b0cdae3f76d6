"""The 6x3 coordinate system for AI-infrastructure metrics.

Every metric and every propagation-graph node lives at exactly one Cell:
a (layer, domain) pair with layers 1..6 running from the electric grid up
to service economics and domains 1..3 separating physical, compute, and
economic/reliability semantics.  Cells are plain frozen values; all the
functions here are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .errors import AssignmentError, CatalogError, CoordinateError

LAYER_NAMES = {
    1: "Grid & Sustainability",
    2: "Facility",
    3: "Compute Hardware",
    4: "Networking & Interconnect",
    5: "ML Execution & Reliability",
    6: "Service, Operations & Economic",
}

DOMAIN_NAMES = {
    1: "Physical Performance & Efficiency",
    2: "Compute & Workload Efficiency",
    3: "Lifecycle Economics & Reliability Risk",
}

N_LAYERS = 6
N_DOMAINS = 3
N_CELLS = N_LAYERS * N_DOMAINS


@dataclass(frozen=True, order=True)
class Cell:
    """One coordinate in the 6x3 grid."""

    layer: int
    domain: int

    def __post_init__(self) -> None:
        if self.layer not in LAYER_NAMES:
            raise CoordinateError(
                f"layer must be in 1..{N_LAYERS}, got {self.layer}"
            )
        if self.domain not in DOMAIN_NAMES:
            raise CoordinateError(
                f"domain must be in 1..{N_DOMAINS}, got {self.domain}"
            )

    @property
    def layer_name(self) -> str:
        return LAYER_NAMES[self.layer]

    @property
    def domain_name(self) -> str:
        return DOMAIN_NAMES[self.domain]

    def __str__(self) -> str:
        return f"(L{self.layer},D{self.domain})"


def validate_cell(layer: int, domain: int) -> Cell:
    """Construct a Cell, rejecting out-of-range coordinates.

    The error names the offending component so reports stay actionable.
    """
    return Cell(int(layer), int(domain))


def cell_index(cell: Cell) -> int:
    """Row-major (layer-outer) index of a cell, 0..17.  Bijective."""
    return (cell.layer - 1) * N_DOMAINS + (cell.domain - 1)


def cell_from_index(index: int) -> Cell:
    """Inverse of cell_index."""
    if not 0 <= index < N_CELLS:
        raise CoordinateError(f"cell index must be in 0..{N_CELLS - 1}, got {index}")
    return Cell(index // N_DOMAINS + 1, index % N_DOMAINS + 1)


def all_cells() -> Iterator[Cell]:
    """The 18 cells in index order."""
    for k in range(N_CELLS):
        yield cell_from_index(k)


@dataclass
class AssignmentReport:
    """Outcome of the unique-cell-assignment check over a catalog."""

    assignments: dict[str, Cell] = field(default_factory=dict)
    coverage: dict[Cell, int] = field(default_factory=dict)
    duplicate_ids: list[str] = field(default_factory=list)
    multi_cell_ids: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.duplicate_ids and not self.multi_cell_ids

    def issues(self) -> list[str]:
        out = [f"duplicate metric id: {mid}" for mid in self.duplicate_ids]
        out += [
            f"metric {mid!r} assigned to multiple cells" for mid in self.multi_cell_ids
        ]
        return out

    def lines(self) -> list[str]:
        """Human-readable report: one line per metric plus the coverage table."""
        out = [f"{mid}: {cell}" for mid, cell in sorted(self.assignments.items())]
        out.append("cell coverage:")
        for cell in all_cells():
            out.append(f"  {cell} {cell.layer_name} / {cell.domain_name}: "
                       f"{self.coverage.get(cell, 0)}")
        out.extend(self.issues())
        return out


def validate_unique_assignment(catalog) -> AssignmentReport:
    """Check that every metric in a catalog occupies exactly one cell.

    Accepts a Catalog (anything exposing ``assignments()`` yielding
    ``(metric_id, Cell)`` pairs) or a bare iterable of such pairs.
    Duplicate ids within one cell are catalog errors; ids spread over
    several cells are assignment errors.  Both are collected into the
    report rather than raised, so callers can display everything at once.
    """
    if hasattr(catalog, "assignments"):
        pairs: Iterable[tuple[str, Cell]] = catalog.assignments()
    else:
        pairs = catalog

    report = AssignmentReport()
    seen: dict[str, set[Cell]] = {}
    counts: dict[str, int] = {}
    for mid, cell in pairs:
        seen.setdefault(mid, set()).add(cell)
        counts[mid] = counts.get(mid, 0) + 1
        report.assignments[mid] = cell
        report.coverage[cell] = report.coverage.get(cell, 0) + 1

    for mid, cells in seen.items():
        if len(cells) > 1:
            report.multi_cell_ids.append(mid)
        elif counts[mid] > 1:
            report.duplicate_ids.append(mid)
    report.duplicate_ids.sort()
    report.multi_cell_ids.sort()
    return report


def require_unique_assignment(catalog) -> AssignmentReport:
    """validate_unique_assignment, raising on failure."""
    report = validate_unique_assignment(catalog)
    if report.duplicate_ids:
        raise CatalogError("duplicate metric id: " + ", ".join(report.duplicate_ids))
    if report.multi_cell_ids:
        raise AssignmentError(
            "metric assigned to multiple cells: " + ", ".join(report.multi_cell_ids)
        )
    return report
