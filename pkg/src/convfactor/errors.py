"""Exception hierarchy shared by all convfactor modules."""


class ConvfactorError(Exception):
    """Base class for all errors raised by this package."""


class GeometryError(ConvfactorError):
    """Invalid geometric input (degenerate component, bad curve, ...)."""


class UndefinedRatioError(GeometryError):
    """Distance ratio requested on a set with a single component."""


class MarginTooLargeError(GeometryError):
    """Offset curves at the requested margin would collide."""


class PointOnCurveError(GeometryError):
    """Winding number requested for a point lying on the curve."""


class CurveFamilyInvalidError(GeometryError):
    """A curve family failed validation against its compact set."""


class NoFatComponentError(ConvfactorError):
    """Operation requires at least one component with nonempty interior."""


class RankDeficiencyError(ConvfactorError):
    """Charge placement produced an unsolvable collocation system."""


class InsideSetError(ConvfactorError):
    """Green's function evaluation requested inside the compact set."""


class MergedLevelSetError(ConvfactorError):
    """Level-set components merge at or below the requested level."""


class NoSaddleError(ConvfactorError):
    """No critical value available (e.g. single-component set)."""


class InsufficientCandidatesError(ConvfactorError):
    """Requested more extremal points than available boundary candidates."""


class DegreeExceedsNodesError(ConvfactorError):
    """Polynomial degree too large for the discretization."""


class WindowUnderflowError(ConvfactorError):
    """Minimax errors hit the numerical floor inside the fit window."""


class QuadratureMismatchError(ConvfactorError):
    """Contour-integral and divided-difference interpolants disagree."""


class BoundViolationError(ConvfactorError):
    """A theoretical inequality failed numerically (should not happen)."""


class ParameterInfeasibleError(ConvfactorError):
    """Explicit-construction parameter search exhausted without success."""


class ConfigError(ConvfactorError):
    """Malformed configuration or scenario file."""
