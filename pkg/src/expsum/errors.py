"""Exception hierarchy shared by every module of the package."""


class ExpSumError(Exception):
    """Base class for all errors raised by :mod:`expsum`."""


class DomainError(ExpSumError, ValueError):
    """An argument lies outside the domain of an operation."""


class RangeError(ExpSumError, OverflowError):
    """A term overflowed while evaluating a sum."""

    def __init__(self, message, term_index=None):
        super().__init__(message)
        self.term_index = term_index


class PairConstructionError(DomainError):
    """A pair function could not be built from the given parameters."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class IdenticallyZeroError(DomainError):
    """The function under study vanishes everywhere, so its zero set is not discrete."""


class SyncInfeasibleError(ExpSumError):
    """A synchronization would force a coefficient to be nonpositive or non-finite."""

    def __init__(self, message, pair_index=None):
        super().__init__(message)
        self.pair_index = pair_index


class NoSolutionError(ExpSumError):
    """No bracket for a share equation was found inside the search window."""


class InfeasibleAdditionError(ExpSumError):
    """A strong term cannot be distributed with positive shares."""

    def __init__(self, message, term=None):
        super().__init__(message)
        self.term = term
