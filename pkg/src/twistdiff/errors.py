"""Exception types shared across the engine."""


class DomainError(ValueError):
    """An argument is outside the physical domain of an operation."""


class GeometryError(ValueError):
    """Degenerate or incompatible geometry (apertures, grids, windows)."""


class PreconditionError(RuntimeError):
    """A physics precondition of a numerical method is not met."""


class QuadratureError(PreconditionError):
    """Requested quadrature order is below the required sampling rate.

    Carries the order that would satisfy the sampling rule so callers can
    retry instead of guessing.
    """

    def __init__(self, message, required_order=None):
        super().__init__(message)
        self.required_order = required_order


class AliasingError(PreconditionError):
    """Spectral content too close to the grid Nyquist limit to propagate."""


class ScenarioError(ValueError):
    """Invalid scenario configuration; `field` holds the offending path."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
