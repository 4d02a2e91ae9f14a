"""Exception hierarchy for qlag."""


class QLagError(Exception):
    """Base class for every error raised by this package."""


class DomainError(QLagError, ValueError):
    """A parameter lies outside the domain of the operation."""


class DegenerateParameterError(DomainError):
    """The hypergeometric form is undefined, since (q^{d+1}; q)_k vanishes."""


class RegimeError(QLagError):
    """Parameters are outside the regime an operation requires."""


class ConvergenceError(QLagError):
    """An iteration exhausted its budget; usually the precision is too low."""


class BracketError(QLagError):
    """A presumed root bracket showed no sign change."""


class DegeneracyError(QLagError):
    """Two zeros could not be separated even at doubled precision."""


class NoSignChangeError(QLagError):
    """A scanned interval never changed sign."""

    def __init__(self, message, signs=None):
        super().__init__(message)
        self.signs = signs or []


class TruncationError(QLagError):
    """A truncated series tail exceeded its tolerance."""


class ChainViolationError(QLagError):
    """A bound chain that should be strictly increasing is not."""

    def __init__(self, message, record=None):
        super().__init__(message)
        self.record = record
