"""Exception types raised by the numerical modules."""


class CapRegionError(Exception):
    """Base class for all library errors."""

    #: module name reported by the CLI on exit code 3
    module = "capregion"


class DegenerateMatrix(CapRegionError):
    module = "toeplitz_core"


class NotPSD(CapRegionError):
    module = "rate_time_domain"


class BudgetExceeded(CapRegionError):
    module = "rate_time_domain"


class SpectrumOnDeadBand(CapRegionError):
    module = "rate_freq_domain"


class PreconditionViolated(CapRegionError):
    module = "rate_freq_domain"


class OptimizerStalled(CapRegionError):
    """The concave ascent hit its iteration cap; ``last_iterate`` holds (x, y)."""

    module = "region_builder"

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate
