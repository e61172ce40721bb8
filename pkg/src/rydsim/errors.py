"""Exception and warning types raised by rydsim."""


class RydsimError(Exception):
    """Base class for all numerical and configuration errors."""


class ConfigError(RydsimError, ValueError):
    """Invalid scenario configuration or parameter values."""


class DegenerateSteadyState(RydsimError):
    """The Liouvillian null space has more than one dimension."""

    def __init__(self, message, dimension):
        super().__init__(message)
        self.dimension = dimension


class NoConvergence(RydsimError):
    pass


class StepTooLarge(RydsimError):
    pass


class AllZeroSpectrum(RydsimError):
    pass


class DefectiveLiouvillian(RydsimError):
    pass


class ZeroDenominator(RydsimError, ZeroDivisionError):
    pass


class DivisionByZero(RydsimError, ZeroDivisionError):
    pass


class ZeroDetuning(RydsimError, ValueError):
    pass


class DegenerateSpectrum(RydsimError):
    pass


class NoPeaks(RydsimError):
    pass


class NegativeDiscriminant(RydsimError, ValueError):
    pass


class PeaksUnresolved(RydsimError):
    pass


class RegimeViolation(UserWarning):
    """A closed-form approximation is being used outside its stated regime."""
