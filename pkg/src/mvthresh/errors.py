"""Exception hierarchy shared by every module."""


class MvThreshError(Exception):
    """Base class for all errors raised by mvthresh."""


class SpecViolation(MvThreshError):
    """A system definition breaks one of the threshold-system invariants."""


class NonZeroBaseThreshold(SpecViolation):
    pass


class NonIncreasingThresholds(SpecViolation):
    pass


class UnreachableTopLevel(SpecViolation):
    pass


class AllZeroWeights(SpecViolation):
    pass


class NegativeWeight(SpecViolation):
    pass


class StateOutOfRange(MvThreshError, ValueError):
    pass


class LevelOutOfRange(MvThreshError, ValueError):
    pass


class StateSpaceTooLarge(MvThreshError):
    def __init__(self, size: int, cap: int):
        super().__init__(f"state space has {size} states, cap is {cap}")
        self.size = size
        self.cap = cap


class NotPre(MvThreshError, ValueError):
    """Expectation requested for an expression whose terms overlap."""


class InvalidDistribution(MvThreshError, ValueError):
    pass


class DefinitionFileError(MvThreshError):
    """A system definition file could not be parsed."""


class MapTooLarge(MvThreshError):
    pass
