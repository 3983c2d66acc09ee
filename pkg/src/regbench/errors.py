"""Exception hierarchy.

The CLI maps :class:`DataError` to exit code 2 and :class:`NumericError`
to exit code 3.
"""


class RegbenchError(Exception):
    """Base class for all errors raised by regbench."""


class ConfigError(RegbenchError, ValueError):
    """Invalid benchmark configuration."""


class DataError(RegbenchError, ValueError):
    """Malformed, missing or unusable input data."""


class ParseError(DataError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericError(RegbenchError, ArithmeticError):
    """A numerical procedure failed or its preconditions do not hold."""


class RankDeficiencyError(NumericError):
    """Design matrix is (numerically) rank deficient.

    ``column`` is the index of the first column found to be linearly
    dependent on the columns before it.
    """

    def __init__(self, column, message=None):
        self.column = column
        super().__init__(message or f"design matrix is rank deficient at column {column}")


class ConvergenceError(NumericError):
    pass
