"""Exception types shared across the package."""


class HullMpcError(Exception):
    """Base class for all package errors."""


class ZeroDirection(HullMpcError):
    """Support query with a zero-length direction."""


class NonConvergence(HullMpcError):
    """Distance iteration exceeded its iteration cap (degenerate input)."""


class EmptyObstacleSet(HullMpcError):
    """Closest-obstacle query over an empty obstacle list."""


class MaxShrinkIterations(HullMpcError):
    """Shrinking loop hit its iteration cap (e.g. coincident centroids)."""


class SingularParameterization(HullMpcError):
    """Orientation-angle rate mapping is singular at this configuration."""


class InvalidLink(HullMpcError):
    """Link index outside the robot model."""


class ZeroGradient(HullMpcError):
    """Distance prediction requested with a zero gradient."""


class Infeasible(HullMpcError):
    """QP has no feasible point."""


class IterationLimit(HullMpcError):
    """QP solver stopped before reaching the requested tolerance."""


class ParseError(HullMpcError):
    """Scenario file is not syntactically valid."""


class ValidationError(HullMpcError):
    """Scenario contents violate an invariant; message names the violation."""


class InsufficientSamples(HullMpcError):
    """Statistical comparison needs at least two episodes per batch."""


class SessionClosed(HullMpcError):
    """Command submitted to a session that is no longer live."""
