"""Exception types shared across the package."""


class ClockSimError(Exception):
    """Base class for all clocksim errors."""


class InvalidParam(ClockSimError):
    """A parameter is outside its admissible range."""


class NonConvergent(ClockSimError):
    """A series evaluation hit its term cap before reaching tolerance."""


class IndexOutOfRange(ClockSimError):
    """A basis index lies outside the centered window of the ring."""


class DimensionTooLarge(ClockSimError):
    """Dense linear algebra was requested above the configured dimension cap."""


class DegenerateDensity(ClockSimError):
    """An outcome density carries (numerically) no mass."""


class NormalizationDrift(ClockSimError):
    """A quantity that must be normalized drifted beyond tolerance."""


class InvalidQuery(ClockSimError):
    """A correlation query violates its preconditions."""


class QuadratureFailure(ClockSimError):
    """Numerical integration did not reach the requested accuracy."""
