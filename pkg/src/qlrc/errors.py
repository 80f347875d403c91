"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ``PreconditionError`` -> 2,
``BudgetExceeded`` -> 3, ``VerificationError`` -> 4.
"""


class QlrcError(Exception):
    """Base class for all package errors."""


class PreconditionError(QlrcError, ValueError):
    """A construction guard or operation precondition does not hold."""


class BudgetExceeded(QlrcError):
    """An exhaustive search would evaluate more items than allowed.

    The result is inconclusive, which is different from a proven negative.
    """

    def __init__(self, what: str, cost: int, budget: int):
        super().__init__(f"{what}: cost {cost} exceeds budget {budget}")
        self.what = what
        self.cost = cost
        self.budget = budget


class OracleInfeasible(QlrcError):
    """An exhaustive optimum oracle was asked for a size it refuses to scan."""


class VerificationError(QlrcError):
    """An independent re-check disagreed with a claimed parameter."""
