"""Exception hierarchy.  Each error carries the CLI exit code it maps to."""


class MassChainError(Exception):
    exit_code = 5


class NumericalError(MassChainError):
    """Generic numerical failure (exit code 5)."""


class MagnitudeOverflowError(NumericalError, OverflowError):
    pass


class SingularSystemError(NumericalError):
    """h sits on (or numerically next to) an eigenvalue of H_N."""


class BreakdownError(NumericalError):
    """A Moebius recursion step divided by (almost) zero."""


class DenominatorVanishesError(NumericalError):
    pass


class OnCutError(NumericalError, ValueError):
    """h lies on [-4, 0], where the ellipse bound does not apply."""


class PoleAtZeroError(NumericalError, ZeroDivisionError):
    pass


class AdmittanceZeroError(NumericalError, ZeroDivisionError):
    pass


class DegenerateConstantsError(NumericalError):
    pass


class ConfigError(MassChainError, ValueError):
    exit_code = 2


class InstabilityError(MassChainError):
    exit_code = 3


class HypothesesUnmetError(MassChainError):
    """Boundedness hypotheses fail; ``reason`` says which one."""

    exit_code = 4

    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason
