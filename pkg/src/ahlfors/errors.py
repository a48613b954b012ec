"""Exception types shared across the package.

Every failure mode raised by the numerical routines derives from
:class:`AhlforsError`, so callers (and the CLI) can catch one base class.
"""


class AhlforsError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(AhlforsError):
    """Domain-spec text is malformed (bad JSON, missing or invalid field)."""


class GeometryError(AhlforsError):
    """A geometric invariant failed (orientation, nesting, winding)."""


class DomainError(AhlforsError):
    """An argument lies outside the mathematical domain of the operation."""


class ConvergenceError(AhlforsError):
    """An iterative or linear solve did not reach the required residual."""


class NearBoundaryError(AhlforsError):
    """Evaluation point too close to the discretized boundary."""


class BranchCutError(AhlforsError):
    """Evaluation on or across a branch cut where the branch is ambiguous."""


class DegeneracyError(AhlforsError):
    """A configuration that should be nondegenerate collapsed (coincident
    roots, critical value hit)."""


class SingularityError(AhlforsError):
    """A kernel or map formula was evaluated at or too near a singular point."""


class AccuracyError(AhlforsError):
    """A computed quantity failed its internal consistency check."""
