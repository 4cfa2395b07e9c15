"""Exception types. The CLI maps each class to a distinct exit code."""


class SrlabError(Exception):
    exit_code = 1


class InvalidInput(SrlabError, ValueError):
    exit_code = 2


class VerificationError(SrlabError):
    exit_code = 3


class CapExceeded(SrlabError):
    exit_code = 4


class GoodReduction(InvalidInput):
    """Raised when a comb is requested for a cover with good reduction."""
