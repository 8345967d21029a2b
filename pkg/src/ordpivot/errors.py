"""Exception hierarchy shared across the package."""


class OrdPivotError(Exception):
    """Base class for all errors raised by this package."""


class InvalidProbability(OrdPivotError):
    """An inclusion probability is outside the open interval (0, 1)."""


class NonIntegerSampleSize(OrdPivotError):
    """The inclusion probabilities do not sum to an integer within tolerance."""


class EmptyCluster(OrdPivotError):
    """A within-cluster operation was requested on a phantom (empty) cluster."""


class PhantomSelected(OrdPivotError):
    """Internal invariant breach: a zero-probability cluster was selected."""


class NonMultiple(OrdPivotError):
    """An equal-probability operation requires the population size to be an
    integer multiple of the sample size."""


class TooLarge(OrdPivotError):
    """Exact enumeration was requested for an instance beyond the feasibility
    guard."""


class SupportViolation(OrdPivotError):
    """KL divergence is undefined: the left design puts mass on a sample the
    right design excludes."""


class ConstantVariable(OrdPivotError):
    """Design effect is undefined for a study variable with zero variance."""


class DivisionByZeroGuard(OrdPivotError):
    """Internal invariant breach: a closed-form case that divides by an exit
    mass was reached with that mass equal to zero."""


class FrameParseError(OrdPivotError):
    """A CSV population frame could not be parsed."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
