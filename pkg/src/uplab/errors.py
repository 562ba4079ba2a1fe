"""Shared error hierarchy.

All failure modes raised by the library derive from :class:`UplabError`, so
callers (notably the CLI) can distinguish certificate/parameter failures from
genuine bugs.  Soft conditions that do not invalidate a result are reported
as :class:`TruncationWarning` and recorded in result metadata, never silently.
"""


class UplabError(Exception):
    """Base class for all library errors."""


class BadParameter(UplabError):
    """An argument is outside its documented domain."""


class BadInput(UplabError):
    """Input data violates a structural precondition."""


class GridTooCoarse(UplabError):
    """The requested operation does not fit on the supplied grid."""


class SpectrumTooWide(UplabError):
    """A coefficient window would overflow the supported index range."""


class NotInvertible(UplabError):
    """The function vanishes somewhere; no inverse in the coefficient algebra."""


class NoConvergence(UplabError):
    """An iterative scheme failed to meet its certified stopping bound."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class Undefined(UplabError):
    """A ratio or statistic is undefined for the given input (e.g. zero data)."""


class NotLogIntegrable(UplabError):
    """The boundary modulus fails the logarithmic integrability gate."""


class MeasureTooSingular(UplabError):
    """A Toeplitz/Gram block is numerically degenerate."""


class IllConditioned(UplabError):
    """A linear system was solved but with an untrustworthy condition estimate."""

    def __init__(self, message, condition=None, value=None):
        super().__init__(message)
        self.condition = condition
        self.value = value


class IterationBudgetExceeded(UplabError):
    """A contraction converges too slowly for the allotted iteration budget."""


class NotRegular(UplabError):
    """A majorant sequence violates the doubling regularity hypothesis."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SmoothnessBudget(UplabError):
    """Fourier envelope certificate unattainable at the requested exponent."""

    def __init__(self, message, best_exponent=None):
        super().__init__(message)
        self.best_exponent = best_exponent


class PartitionInfeasible(UplabError):
    """The scale partition of the circle cannot be assembled from the majorant."""


class FourierBudget(UplabError):
    """A constructed function fails its Fourier majorant audit after rescaling."""


class ModulationSearchFailed(UplabError):
    """No modulation in the search budget produced a usable transform value."""


class NotSubharmonic(UplabError):
    """The envelope slope is below the Hilbert-transform supremum."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SlopeBudget(UplabError):
    """The conjugate-function slope budget is infeasible for the given data."""


class TruncationWarning(UserWarning):
    """Input does not decay at the truncation boundary; results carry the error."""
