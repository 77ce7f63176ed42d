from typing import Optional


class SolverError(Exception):
    """Base error of the solver stack.

    Carries a human readable ``detail`` and the process exit code the command
    line front end reports for it.
    """

    exit_code: int = 1

    def __init__(self, detail: str, **context):
        super().__init__(detail)
        self.detail = detail
        self.context = context

    def __str__(self) -> str:
        return self.detail


class ConfigurationError(SolverError):
    exit_code = 2


class DimensionError(SolverError):
    exit_code = 2


class FieldFormatError(ConfigurationError):
    def __init__(self, detail: str, line: Optional[int] = None):
        if line is not None:
            detail = f"line {line}: {detail}"
        super().__init__(detail, line=line)
        self.line = line


class FieldValidationError(ConfigurationError):
    pass


class StateError(SolverError):
    """Unphysical state, e.g. a non-positive density."""

    exit_code = 3


class FactorizationError(SolverError):
    exit_code = 3

    def __init__(self, detail: str, row: Optional[int] = None):
        if row is not None:
            detail = f"{detail} (pivot row {row})"
        super().__init__(detail, row=row)
        self.row = row


class LocalSolveError(FactorizationError):
    def __init__(self, block: int, category: str, cause: FactorizationError):
        SolverError.__init__(
            self,
            f"local problem of dual block {block} ({category} cells) is singular: {cause.detail}",
            block=block,
            category=category,
        )
        self.row = cause.row
        self.block = block
        self.category = category


class ConvergenceError(SolverError):
    exit_code = 3


class ResultIOError(SolverError):
    exit_code = 4
