"""Exception hierarchy shared by all modules."""


class TSIError(Exception):
    """Base class for library errors."""


class DomainError(TSIError, ValueError):
    """An input violates an operation's precondition."""


class NormalizationError(TSIError, ValueError):
    """A state vector has zero norm and cannot be normalized."""


class UndefinedStatistic(TSIError, ArithmeticError):
    """A statistic is undefined for the given state (e.g. division by <n> = 0)."""


class CutoffError(TSIError, RuntimeError):
    """The Fock-space cutoff is too small for the requested operator chain."""


class RootFindingError(TSIError, RuntimeError):
    """Polynomial root finding failed or produced roots with large residuals."""
