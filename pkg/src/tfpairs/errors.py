"""Exception hierarchy.

Config problems derive from :class:`ConfigError`, numerical breakdowns from
:class:`NumericalError` and failed completion searches from
:class:`ConvergenceError`; the CLI maps the three families onto exit codes
2, 3 and 4.
"""


class SimulationError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(SimulationError, ValueError):
    pass


class NegativeParameter(ConfigError):
    pass


class ResonanceMismatch(ConfigError):
    pass


class ZeroAnharmonicityWithCoupling(ConfigError):
    pass


class DispersiveGuardViolated(ConfigError):
    pass


class InvalidGrid(ConfigError):
    pass


class DegenerateSystem(ConfigError):
    pass


class NumericalError(SimulationError, ArithmeticError):
    pass


class NonFiniteResult(NumericalError):
    pass


class SliceInconsistency(NumericalError):
    pass


class EmptySpectrum(NumericalError):
    pass


class EmptyDensity(NumericalError):
    pass


class DomainExceedsGrid(NumericalError):
    pass


class NotHermitian(NumericalError):
    pass


class NotPSD(NumericalError):
    pass


class UnnormalizedInput(NumericalError):
    pass


class IntegratorFailure(NumericalError):
    pass


class ConvergenceError(SimulationError):
    pass


class NoConvergence(ConvergenceError):
    pass
