"""Exception and warning types shared across the package."""


class SelbergLabError(Exception):
    """Base class for all package errors."""


class NonConvergence(SelbergLabError):
    """A quadrature or series refinement stalled before reaching tolerance."""


class DomainError(SelbergLabError):
    """An argument lies outside the mathematical domain of the operation."""


class PoleError(SelbergLabError):
    """Evaluation requested at (or too close to) a pole."""


class ParseError(SelbergLabError):
    """A data file failed to parse; carries the offending line number."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = f"{path}:{line}: " if path is not None and line is not None else ""
        super().__init__(where + message)


class ValidationError(SelbergLabError):
    """Parsed data violates a dataset invariant."""


class IncompleteData(SelbergLabError):
    """A cutoff exceeds the range over which the dataset is complete."""


class UnsupportedGroup(SelbergLabError):
    """The operation is only implemented for the modular group."""


class InsufficientEnumeration(SelbergLabError):
    """The hyperbolic class list stops short of the requested range."""


class AdmissibilityError(SelbergLabError):
    """A test-function pair fails the decay conditions required upstream."""


class TruncationWarning(UserWarning):
    """A truncated tail is larger than the requested relative budget."""


class ConvergenceWarning(UserWarning):
    """Partial sums over increasing cutoffs still move at the checked level."""


class FitWarning(UserWarning):
    """A least-squares fit is poorly conditioned."""


class RangeWarning(UserWarning):
    """An asymptotic expansion was evaluated outside its intended range."""


class PrecisionWarning(UserWarning):
    """Severe cancellation detected; fewer correct digits than usual."""
