class UltrakitException(Exception):
    """
    Base class for every error raised by ultrakit.
    """


class QueryOutsideAlgebra(UltrakitException):
    """
    This exception is thrown when a largeness query is not an
    ultimately periodic subset of the carrier.
    """


class CarrierMismatch(UltrakitException):
    """
    This exception is thrown when a map, family or ultrafilter is
    used with a carrier it was not built for.
    """


class UnsupportedEncoding(UltrakitException):
    """
    This exception is thrown when a sum carrier has no supported
    encoding as an index set.
    """


class NotAnUltrafilterMap(UltrakitException):
    """
    This exception is thrown when reindexing along a map f : λ -> κ
    with f_*(λ) != κ.
    """


class EmptyLargeFiber(UltrakitException):
    """
    This exception is thrown when the set of indices with an empty
    fiber is large, so the ultraproduct has no element.
    """


class UnboundedFibers(UltrakitException):
    pass


class SearchInconclusive(UltrakitException):
    pass


class SpaceValidationError(UltrakitException):
    """
    This exception is thrown when a list of opens is not a topology.
    """


class MissingEmptyOrFull(SpaceValidationError):
    pass


class NotClosedUnderUnion(SpaceValidationError):
    pass


class NotClosedUnderIntersection(SpaceValidationError):
    pass


class NotContinuous(UltrakitException):
    pass


class TheoremMismatch(UltrakitException):
    """
    Two independent characterisations disagreed. This is never a user
    error: the witness replays the disagreement.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnsupportedUltrafilter(UltrakitException):
    pass


class TypeMismatch(UltrakitException):
    pass


class FunctorialityViolation(UltrakitException):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ProbeExhausted(UltrakitException):
    """
    This exception is thrown when a validation would need more probe
    queries than the probe strategy allows.
    """


class ParseError(UltrakitException):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class BoundExceeded(UltrakitException):
    pass


class ConfigError(UltrakitException):
    pass


class CategoryValidationError(UltrakitException):
    """
    This exception is thrown when a composition table breaks the
    category laws.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
