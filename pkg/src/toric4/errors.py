"""Shared exception types."""


class DegenerateMetricError(ValueError):
    """Metric matrix is singular or not positive definite."""


class InvalidToleranceError(ValueError):
    """A tolerance argument must be strictly positive."""


class ConformalFactorError(ValueError):
    """Conformal factors must be strictly positive."""


class DegenerateWeylError(ValueError):
    """Self-dual Weyl curvature vanishes where a nonzero value is required."""


class AxisEvaluationError(ValueError):
    """Evaluation requested on the singular axis of a chart."""


class DomainError(ValueError):
    """Point lies outside the declared domain of a metric family."""


class DegenerateFiberError(ValueError):
    """Torus fiber metric is degenerate at the requested point."""


class InsufficientDataError(ValueError):
    """A profile or sample set is too short for the requested analysis."""
