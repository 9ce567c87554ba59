"""
Base classes for the command system.

This module contains the result type shared by command handlers and the
mapping from results to process exit codes.
"""

from typing import Any

from cellpm.exceptions import (
    DivisibilityError,
    InstanceFormatError,
    UnknownMethodError,
    UnknownModelError,
    UsageError,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INPUT_ERROR = 2

INPUT_ERRORS = (
    InstanceFormatError,
    UsageError,
    UnknownMethodError,
    UnknownModelError,
    DivisibilityError,
)


class CommandResult:
    """Class to represent the result of a command execution."""

    def __init__(
        self,
        success: bool,
        data: Any = None,
        message: str | None = None,
        error: Exception | None = None,
        input_error: bool = False,
    ):
        self.success = success
        self.data = data
        self.message = message
        self.error = error
        self.input_error = input_error

    @property
    def exit_code(self) -> int:
        """0 success, 1 failed run or verification, 2 bad input or usage."""
        if self.success:
            return EXIT_OK
        if self.input_error or isinstance(self.error, INPUT_ERRORS):
            return EXIT_INPUT_ERROR
        return EXIT_FAILURE
