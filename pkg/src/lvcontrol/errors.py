"""Exception hierarchy.

Two top-level families matter for the CLI exit-code contract: configuration
problems (bad arguments, malformed configs, invalid brackets) exit with 2,
numerical failures (instability, non-convergence, failed searches) with 3.
"""


class LvControlError(Exception):
    """Base class for all toolkit errors."""


class ConfigError(LvControlError):
    """Invalid argument, malformed config document, or violated precondition."""


class BracketError(ConfigError):
    """A bisection bracket whose endpoints do not straddle the transition."""


class NumericalError(LvControlError):
    """A computation that started from valid inputs failed to produce a result."""


class StabilityError(NumericalError):
    """A time step left the admissible state box; names the offending node."""


class NonConvergedError(NumericalError):
    """An iteration hit its budget without meeting its tolerance."""


class SearchFailureError(NumericalError):
    """A parameter search exhausted its range without satisfying the goal."""


class DomainTooSmallError(NumericalError):
    """A moving front reached the edge of the computational window."""


class UnreliableEstimateError(NumericalError):
    """A fitted quantity failed its internal quality check."""


class ResolutionFailureError(NumericalError):
    """Probe results contradict the monotone structure they must respect."""
