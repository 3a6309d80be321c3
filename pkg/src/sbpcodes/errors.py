"""Exception hierarchy shared by every module in the package."""


class SbpError(Exception):
    """Base class for all library errors."""


class FieldMismatch(SbpError):
    pass


class InversionOfZero(SbpError, ZeroDivisionError):
    pass


class CoefficientOverflow(SbpError):
    """A falling-factorial coefficient would vanish modulo q."""


class SingularMatrix(SbpError):
    pass


class DecodingFailure(SingularMatrix):
    """The interpolation system built from the received results is singular."""


class NonDivisible(SbpError, ValueError):
    pass


class DimensionMismatch(SbpError, ValueError):
    pass


class MissingBlock(SbpError, KeyError):
    pass


class InvalidParams(SbpError, ValueError):
    pass


class NonPrefixOrders(SbpError, ValueError):
    """A worker reported a derivative order without all the lower ones."""


class SizeMismatch(SbpError, ValueError):
    pass


class NotEnoughResults(SbpError):
    pass


class FieldTooSmall(SbpError, ValueError):
    pass


class SpaceTooLarge(SbpError, ValueError):
    pass


class ConfigError(SbpError, ValueError):
    pass
