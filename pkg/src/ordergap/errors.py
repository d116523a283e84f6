"""Exception types shared across the package."""


class OrderGapError(Exception):
    """Base class for all errors raised by this package."""


class GraphError(OrderGapError):
    """Base class for epistemic-state-graph violations."""


class CapacityExceeded(GraphError):
    """Node insertion would exceed the configured capacity bound."""


class InvalidConfidence(GraphError):
    """Confidence outside the half-open interval (0, 1]."""


class InvalidWeight(GraphError):
    """Edge weight outside the half-open interval (0, 1]."""


class UnknownNode(GraphError):
    """Referenced node id does not exist."""


class EdgeTypeViolation(GraphError):
    """Edge endpoints are incompatible with the edge type."""


class DuplicateEdge(GraphError):
    """An edge with the same (src, dst, kind) triple already exists."""


class WrongNodeKind(GraphError):
    """Operation applied to a node of the wrong kind."""


class DimensionMismatch(OrderGapError):
    """Vector or attribute length does not match the configured dimension."""


class ConfigMismatch(OrderGapError):
    """Two embedded states do not share the same embedding configuration."""


class EmptySupport(OrderGapError):
    """Evidence distribution has no item with positive effective weight."""


class ScriptExhausted(OrderGapError):
    """Evidence script is shorter than the requested number of steps."""


class InsufficientHistory(OrderGapError):
    """Trace holds fewer records than the requested window width."""


class RedundancyViolated(OrderGapError):
    """Expansion moves the consolidation fixed point by more than the tolerance."""

    def __init__(self, evidence_id: str, deviation: float, tolerance: float):
        self.evidence_id = evidence_id
        self.deviation = deviation
        self.tolerance = tolerance
        super().__init__(
            f"evidence {evidence_id!r} moves the fixed point by {deviation:.3e} "
            f"(tolerance {tolerance:.3e})"
        )


class FixedPointDivergence(OrderGapError):
    """Consolidation iteration did not meet the residual tolerance."""

    def __init__(self, residual: float, iterations: int):
        self.residual = residual
        self.iterations = iterations
        super().__init__(
            f"no fixed point after {iterations} iterations (residual {residual:.3e})"
        )


class ZeroDirection(OrderGapError):
    """Resolving the question does not move the embedded state."""


class NumericalError(OrderGapError):
    """Non-finite value encountered during a numerical routine."""


class ScenarioError(OrderGapError):
    """Scenario file failed validation."""
