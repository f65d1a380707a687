"""Exception hierarchy shared by every module.

Each class carries the CLI exit code it maps to.
"""


class ProbNTError(Exception):
    exit_code = 1


class UsageError(ProbNTError, ValueError):
    """Invalid arguments: bad orders, grids, scales, binnings."""

    exit_code = 2


class DomainError(UsageError):
    """Argument outside the mathematical domain of an operation (e.g. ln ln n <= 0)."""


class InvalidBinningError(UsageError):
    pass


class HypothesisViolation(ProbNTError):
    """A theorem's hypotheses do not hold for the requested function."""

    exit_code = 3


class DegenerateDistributionError(HypothesisViolation):
    """Zero variance or zero mean where a ratio or a normalization needs it."""


class CapacityError(ProbNTError, MemoryError):
    exit_code = 4
