"""Exception hierarchy shared by every module.

Each class carries the process exit code the command-line front end uses
when the error escapes a subcommand.
"""


class MggpError(Exception):
    exit_code = 1


class SchemaMismatch(MggpError):
    """CSV header does not match the documented column schema."""

    exit_code = 2


class BadValue(MggpError):
    """A CSV cell could not be parsed or violates a column constraint."""

    exit_code = 2

    def __init__(self, row, column, token, reason="invalid value"):
        self.row = row
        self.column = column
        self.token = token
        super().__init__(f"row {row}, column {column!r}: {reason} ({token!r})")


class ConfigError(MggpError):
    exit_code = 2


class ParseError(MggpError):
    """Prefix expression could not be parsed.

    ``position`` is the character offset of the offending token.
    """

    exit_code = 2

    def __init__(self, message, position, token=None):
        self.message = message
        self.position = position
        self.token = token
        where = f"position {position}"
        if token is not None:
            where += f" (token {token!r})"
        super().__init__(f"{message} at {where}")


class ConstantColumn(MggpError):
    exit_code = 3


class IllConditioned(MggpError):
    exit_code = 3


class DegenerateTarget(MggpError):
    exit_code = 3


class DegenerateFit(MggpError):
    exit_code = 3


class PolarDayNight(MggpError):
    """The sun does not rise or does not set on the requested day."""

    exit_code = 3
