"""Exception hierarchy shared by all modules."""


class UncertaintyLimitsError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameterError(UncertaintyLimitsError, ValueError):
    pass


class ResolutionError(UncertaintyLimitsError):
    """A discretization cannot resolve the requested quantity."""


class ConvergenceError(UncertaintyLimitsError):
    pass


class ZeroEnergyError(UncertaintyLimitsError, ValueError):
    pass


class NonDecayingSignalError(UncertaintyLimitsError, ValueError):
    """Signal tails do not decay on the sampling grid."""


class GridTooCoarseError(UncertaintyLimitsError, ValueError):
    pass


class ExcludedPairError(UncertaintyLimitsError, ValueError):
    """(alpha, beta) is one of the corner pairs (1, 0) or (0, 1)."""


class InconsistentSpecError(UncertaintyLimitsError, ValueError):
    pass


class MissingFieldError(UncertaintyLimitsError, KeyError):
    def __init__(self, field):
        super().__init__(field)
        self.field = field

    def __str__(self):
        return f"missing required field: {self.field!r}"


class UnstableSystemError(UncertaintyLimitsError, ValueError):
    pass


class ImproperSystemError(UncertaintyLimitsError, ValueError):
    pass


class NonIntegrableError(UncertaintyLimitsError, ValueError):
    """|H(jw)| is not integrable on [0, inf)."""


class NoCrossingError(UncertaintyLimitsError):
    pass


class NoPeakError(UncertaintyLimitsError):
    pass
