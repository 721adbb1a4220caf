"""Exception hierarchy. Each class carries the CLI exit code for its error class."""


class CvfLabError(Exception):
    exit_code = 1


class UsageError(CvfLabError, ValueError):
    exit_code = 2


class ContractViolation(CvfLabError):
    """An operation was called outside its precondition (e.g. firing a disabled action)."""

    exit_code = 2


class ResourceError(CvfLabError):
    exit_code = 3


class StabilizationError(CvfLabError):
    """The program-transition graph outside the invariant is not acyclic/convergent."""

    exit_code = 4

    def __init__(self, message, state=None):
        super().__init__(message)
        self.state = state


class OutputError(CvfLabError, OSError):
    exit_code = 5


class GenerationError(CvfLabError):
    exit_code = 1


class FitError(CvfLabError):
    exit_code = 1


class EmptyHistogramError(CvfLabError):
    exit_code = 1


class DegenerateReportError(CvfLabError):
    exit_code = 1


class UnreachableInvariantError(CvfLabError):
    exit_code = 4
