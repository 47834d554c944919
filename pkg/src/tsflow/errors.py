"""Exception types shared across the package."""


class TSFlowError(Exception):
    """Base class for every error raised by tsflow."""


class MalformedBlock(TSFlowError):
    pass


class PairCoverageError(TSFlowError):
    def __init__(self, pair, count, expected):
        self.pair = pair
        self.count = count
        self.expected = expected
        super().__init__(
            f"pair {{{pair[0]},{pair[1]}}} covered {count} times, expected {expected}"
        )


class NotADesign(TSFlowError):
    pass


class SearchTimeout(TSFlowError):
    """A bounded search ran out of budget before reaching a verdict."""


class LengthMismatch(TSFlowError):
    pass


class MismatchedPointSet(TSFlowError):
    pass


class InvalidInputFlow(TSFlowError):
    pass


class DegenerateOrder(TSFlowError):
    pass


class Unsupported(TSFlowError):
    """Parameters outside what the implemented constructions cover."""


class UnsupportedOrder(Unsupported):
    pass


class BadOrder(TSFlowError):
    pass


class NotCubic(TSFlowError):
    pass


class SearchExhausted(TSFlowError):
    pass


class SingleClass(TSFlowError):
    pass


class ShortOrbit(TSFlowError):
    pass


class InvalidStructure(TSFlowError):
    pass


class FactorCountMismatch(TSFlowError):
    pass


class InvalidCertificate(TSFlowError):
    pass


class NoDesign(TSFlowError):
    """No TS(v, lambda) exists for the requested parameters."""


class NoFlowExists(TSFlowError):
    """Certified: no flow of the requested width exists."""


class NotAchieved(TSFlowError):
    def __init__(self, message, attempted=()):
        self.attempted = tuple(attempted)
        super().__init__(message)
