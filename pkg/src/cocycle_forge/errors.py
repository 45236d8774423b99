"""Exception hierarchy shared by every module."""


class ForgeError(Exception):
    """Base class for all library errors."""


class PrecisionExhausted(ForgeError):
    """A leading term or comparison could not be certified at the stored precision."""


class NotAUnit(ForgeError):
    pass


class RingMismatch(ForgeError):
    pass


class NotInvertible(ForgeError):
    pass


class NotApplicable(ForgeError):
    pass


class TooLarge(ForgeError):
    pass


class NotEquivalent(ForgeError):
    """Raised by witness searches that were asked to fail loudly."""


class DegreeBoundTooSmall(ForgeError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class DepthTooSmall(ForgeError):
    """The explored region does not resolve the cusp structure of the quotient."""


class EdgeNotPresent(ForgeError):
    pass


class IncompatibleWeight(ForgeError):
    pass


class OutOfExploredRegion(ForgeError):
    pass


class InvarianceViolation(ForgeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ClosureIncomplete(ForgeError):
    pass
