"""Exception hierarchy shared by every module; the CLI maps these to exit codes."""


class PoslogError(Exception):
    exit_code = 1


class InputError(PoslogError, ValueError):
    exit_code = 2


class ResourceError(PoslogError):
    exit_code = 3


class InternalError(PoslogError, AssertionError):
    """Two independent computations disagreed; reported as a failed check."""

    exit_code = 1
