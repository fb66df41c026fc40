class CycleCoverError(ValueError):
    """Base class for every error raised by the library."""


class OutOfRange(CycleCoverError):
    pass


class EmptyGraph(CycleCoverError):
    pass


class BudgetExceeded(CycleCoverError):
    pass


class PreconditionViolated(CycleCoverError):
    pass


class TooManyColours(CycleCoverError):
    pass


class BadParams(CycleCoverError):
    pass


class BadSizes(CycleCoverError):
    pass


class BadK(CycleCoverError):
    pass


class InfeasibleFamily(CycleCoverError):
    pass


class NoAbsentColour(CycleCoverError):
    pass


class GenerationFailed(CycleCoverError):
    pass


class NotTwoLocal(CycleCoverError):
    pass


class NotRLocal(CycleCoverError):
    pass


class MeanTooHigh(CycleCoverError):
    pass


class StructureViolation(CycleCoverError):
    pass


class ConfigError(CycleCoverError):
    pass


class ParseError(CycleCoverError):
    pass


class LemmaViolation(CycleCoverError):
    """A constructive step produced an object that fails its own postcondition."""
