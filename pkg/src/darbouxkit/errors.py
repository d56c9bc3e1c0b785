"""Exception hierarchy shared by all modules."""


class DarbouxError(Exception):
    """Base class for every error raised by darbouxkit."""


# zero testing / evaluation

class UndecidedAfterRetries(DarbouxError):
    """Every sampled point was a pole or outside the domain."""


class PoleAtPoint(DarbouxError):
    pass


class DomainError(DarbouxError):
    pass


# operators

class ZeroOperator(DarbouxError):
    pass


class ZeroGauge(DarbouxError):
    pass


# transformations

class ConditionViolated(DarbouxError):
    """No first-order Darboux transformation exists for the requested pair."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NotInKernel(DarbouxError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NotApplicable(DarbouxError):
    pass


class ZeroInvariant(DarbouxError):
    pass


class GaugeNotRepresentable(DarbouxError):
    pass


class NotHyperbolicNormalForm(DarbouxError):
    pass


class TooFewSolutions(DarbouxError):
    def __init__(self, k_required, given):
        super().__init__(f"{k_required} kernel elements required, {given} given")
        self.k_required = k_required
        self.given = given


class RatioNotSeparated(DarbouxError):
    def __init__(self, index, derivative=None):
        super().__init__(f"ratio psi_{index}/psi_1 is not a function of one variable")
        self.index = index
        self.derivative = derivative


class WronskianVanishes(DarbouxError):
    pass


# wronskians

class SizeMismatch(DarbouxError):
    pass


class DenominatorVanishes(DarbouxError):
    pass
