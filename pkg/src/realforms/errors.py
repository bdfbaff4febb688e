"""Exception hierarchy.

Three families, matching the command-line exit codes:

* ``InputError`` (exit 2): malformed documents, bad parameters, group-membership failures.
* ``PreconditionError`` (exit 3): the input is well formed but a mathematical hypothesis
  does not hold (not irreducible, not fixed by the involution, not semi-simple).
* ``NumericalError`` (exit 4): a contract or residual check failed during computation.
"""


class RealFormError(Exception):
    exit_code = 1

    def to_dict(self):
        return {"error": type(self).__name__, "message": str(self), "exit_code": self.exit_code}


class InputError(RealFormError):
    exit_code = 2


class ParameterError(InputError, ValueError):
    pass


class ParseError(InputError):
    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer or "/"

    def to_dict(self):
        d = super().to_dict()
        d["pointer"] = self.pointer
        return d


class ValidationError(InputError):
    pass


class UnsupportedSizeError(ParameterError):
    pass


class PreconditionError(RealFormError):
    exit_code = 3


class NotApplicableError(PreconditionError):
    """``reason`` is a short machine-readable code such as ``"not phi-fixed"``."""

    def __init__(self, message, reason=None):
        super().__init__(message)
        self.reason = reason

    def to_dict(self):
        d = super().to_dict()
        d["reason"] = self.reason
        return d


class SemiSimplicityError(PreconditionError):
    reason = "not semi-simple"

    def to_dict(self):
        d = super().to_dict()
        d["reason"] = self.reason
        return d


class NumericalError(RealFormError):
    exit_code = 4


class ContractError(NumericalError):
    pass


class DegenerateFormError(NumericalError):
    pass


class IndeterminateError(NumericalError):
    """A rank decision fell inside the guard band around the threshold."""

    def __init__(self, message, gap=None):
        super().__init__(message)
        self.gap = gap

    def to_dict(self):
        d = super().to_dict()
        d["gap"] = self.gap
        return d


class PairingError(NumericalError):
    pass


class ConditioningError(NumericalError):
    pass


class NumericalFailure(NumericalError):
    def __init__(self, message, branch=None):
        super().__init__(message)
        self.branch = list(branch or [])

    def to_dict(self):
        d = super().to_dict()
        d["branch"] = self.branch
        return d
