"""Exception types shared across the package.

Every error raised by mpglab derives from MpglabError so callers can fence
off library failures from programming errors.  The CLI maps DocumentError
(and I/O) to exit code 2 and everything else here to exit code 1.
"""


class MpglabError(Exception):
    """Base class for all mpglab errors."""


class CoordinateError(MpglabError):
    """Layer or domain index outside the 6x3 grid."""


class CatalogError(MpglabError):
    """Malformed catalog content (duplicate ids, unknown metric, bad entry)."""


class AssignmentError(CatalogError):
    """A metric is assigned to zero or multiple taxonomy cells."""


class DimensionError(MpglabError):
    """Incompatible unit dimensions in a formula, binding, or cashflow."""


class UnitParseError(DimensionError):
    """Unit token or quantity suffix could not be parsed."""


class ExpressionError(MpglabError):
    """Malformed formula text or AST."""


class EvaluationError(MpglabError):
    """A formula could not be evaluated over the given bindings."""


class SingularInputError(EvaluationError):
    """Division by zero; the message names the vanishing denominator."""


class SingularOutputError(MpglabError):
    """Levelized-cost denominator (discounted output) is zero."""


class StepSizeError(MpglabError):
    """Non-positive finite-difference step."""


class ConnectivityError(MpglabError):
    """Topology has at least two mutually unreachable nodes."""


class SizeError(MpglabError):
    """Topology too small for the requested computation."""


class TopologyScaleError(MpglabError):
    """Exhaustive balanced bisection requested beyond the node-count bound."""


class DataError(MpglabError):
    """Required topology aggregates missing."""


class GraphError(MpglabError):
    """Base class for propagation-graph construction/validation errors."""


class CycleError(GraphError):
    """Cross-layer cycle, or intra-layer cycle without a whitelist entry."""


class UnknownNodeError(GraphError):
    """Edge endpoint or shock target does not name a declared node."""


class OperatorError(GraphError):
    """Invalid propagation-operator parameters or nesting."""


class InvalidGraphError(GraphError):
    """Graph failed validation; carries the full report."""

    def __init__(self, report):
        self.report = report
        super().__init__("; ".join(report.issues))


class PathError(MpglabError):
    """Requested path is broken or ambiguous at some hop."""


class ReachabilityError(MpglabError):
    """No path exists between the requested source and destination."""


class PathScaleError(MpglabError):
    """Simple-path enumeration exceeded the supported count."""


class StateError(MpglabError):
    """State object inconsistent with the graph (missing node, bad dim)."""


class NumericOverflowError(MpglabError):
    """A step produced a non-finite value; the message names the node."""


class ShapeError(MpglabError):
    """Non-square matrix where a square one is required."""


class ScenarioError(MpglabError):
    """Scenario inconsistent with its graph or horizon."""


class DocumentError(MpglabError):
    """Unparseable or schema-invalid input document (exit code 2 in the CLI)."""


class SchemaVersionError(DocumentError):
    """Document schema field missing or not a supported version."""
