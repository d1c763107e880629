"""Exception types raised across the package."""


class PdmError(Exception):
    """Base class for all package errors."""


class DomainError(PdmError, ValueError):
    """A field was evaluated outside its validity interval."""


class UnsupportedOrder(PdmError, ValueError):
    pass


class DivisionByGenerator(PdmError, ZeroDivisionError):
    """The momentum-weight recursion divides by a generator that vanishes."""


class FlowEscape(PdmError, RuntimeError):
    def __init__(self, message, escape_time):
        super().__init__(message)
        self.escape_time = escape_time


class MassSignError(PdmError, ValueError):
    pass


class OrderingConstraintError(PdmError, ValueError):
    pass


class StepSingular(PdmError, RuntimeError):
    pass


class ProbeEscape(PdmError, ValueError):
    pass


class IterationStall(PdmError, RuntimeError):
    def __init__(self, message, level):
        super().__init__(message)
        self.level = level


class ParamError(PdmError, ValueError):
    pass


class GammaUndefined(ParamError):
    def __init__(self, message, log_argument):
        super().__init__(message)
        self.log_argument = log_argument


class AmbiguousResolution(PdmError, RuntimeError):
    """The conjugation oracle did not single out one (sign, convention) pair."""

    def __init__(self, message, resolution=None):
        super().__init__(message)
        self.resolution = resolution


class NotDiscriminating(AmbiguousResolution):
    """All candidate pairs give the same target, so there is nothing to resolve."""


class InsufficientBoundStates(PdmError, RuntimeError):
    pass
