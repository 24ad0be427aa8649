"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ``InputError`` -> 1, ``CapacityError`` -> 2,
``InternalInvariantError`` -> 3.  Everything else that carries a witness is a
verdict, not a failure.
"""


class SubflowError(Exception):
    pass


class InputError(SubflowError, ValueError):
    pass


class CapacityError(SubflowError):
    pass


class DomainError(SubflowError, ValueError):
    pass


class InternalInvariantError(SubflowError, AssertionError):
    """Raised when a result contradicts a theorem the code relies on."""


class VerdictError(SubflowError):
    """Base for negative verdicts that carry a machine-checkable witness."""

    def __init__(self, message, witness=None, slack=None):
        super().__init__(message)
        self.witness = witness
        self.slack = slack


class PreconditionViolated(VerdictError):
    pass


class HypothesisViolated(VerdictError):
    pass


class ObjectiveNotRealizable(VerdictError):
    pass


class ConnectivityTooLow(VerdictError):
    pass


class NotTU(VerdictError):
    pass


class ReductionInapplicable(VerdictError):
    pass


class Infeasible(VerdictError):
    pass


class Unbounded(VerdictError):
    pass
