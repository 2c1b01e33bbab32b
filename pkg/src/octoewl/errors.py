"""Exception types shared across the package."""


class InvalidStrategyError(ValueError):
    """A strategy violates the unit-norm or arity invariants."""


class MeasurementError(ValueError):
    """Measurement basis or state is unusable."""


class NonOrthogonalInstanceError(ValueError):
    """Simulation requested on an instance whose outcome basis is not orthogonal."""


class GameSpecError(ValueError):
    """A game specification file is malformed."""
