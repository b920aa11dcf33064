"""Exception types shared across the package."""


class HydrogateError(Exception):
    """Base class for all package errors."""


class InvalidParameter(HydrogateError):
    def __init__(self, name, reason):
        self.name = name
        self.reason = reason
        super().__init__(f"invalid parameter {name!r}: {reason}")


class LengthMismatch(HydrogateError):
    pass


class NonPositiveArgument(HydrogateError):
    pass


class DurationTooShort(HydrogateError):
    pass


class DegenerateDistance(HydrogateError):
    pass


class InvalidTrain(HydrogateError):
    pass


class ResolutionTooCoarse(HydrogateError):
    pass


class UnstableTimestep(HydrogateError):
    pass


class NoPulse(HydrogateError):
    pass


class EmptyInput(HydrogateError):
    pass


class InsufficientScenarios(HydrogateError):
    pass


class DegenerateOracle(HydrogateError):
    pass


class UnknownParameter(HydrogateError):
    pass


class MissingCache(HydrogateError):
    pass
