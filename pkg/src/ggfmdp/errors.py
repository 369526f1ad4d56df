"""Exception hierarchy shared across the toolkit."""


class GgfMdpError(Exception):
    """Base class for all toolkit errors."""


class SingularMatrix(GgfMdpError):
    pass


class NoConvergence(GgfMdpError):
    pass


class IterationLimit(GgfMdpError):
    pass


class BadDistribution(GgfMdpError):
    pass


class DimensionMismatch(GgfMdpError):
    pass


class DimensionTooLarge(GgfMdpError):
    pass


class InvalidPreset(GgfMdpError):
    pass


class InvalidTransfer(GgfMdpError):
    pass


class ShapeMismatch(GgfMdpError):
    pass


class ParseError(GgfMdpError):
    pass


class InvariantViolation(GgfMdpError):
    pass


class GammaOutOfRange(GgfMdpError):
    def __init__(self, low, high, gamma=None):
        self.low = low
        self.high = high
        self.gamma = gamma
        msg = f"gamma must lie in ({low}, {high})"
        if gamma is not None:
            msg += f", got {gamma}"
        super().__init__(msg)


class GammaBelowThreshold(GammaOutOfRange):
    pass


class GammaTooCloseToThreshold(GgfMdpError):
    pass


class LpFailure(GgfMdpError):
    def __init__(self, status, detail=""):
        self.status = status
        super().__init__(f"LP solve failed with status {status}. {detail}".strip())


class BadParams(GgfMdpError):
    pass


class EmptyBatch(GgfMdpError):
    pass


class ZeroMean(GgfMdpError):
    pass


class NotUnichainWarning(UserWarning):
    """Average-reward LP ran on an instance whose recovered policy is not unichain."""
