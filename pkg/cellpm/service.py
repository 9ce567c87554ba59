"""
Service layer for cellpm.
Provides a facade that looks commands up, validates their arguments and runs them.
"""

import logging
from typing import Any, Dict, Optional, Tuple

import jsonschema

from cellpm.command_registry import CommandDefinition, get_command
from cellpm.commands.base import CommandResult


class CellpmService:
    """Service layer between the CLI and the command handlers."""

    def _validate_args(
        self, command_def: CommandDefinition, raw_kwargs: Dict[str, Any]
    ) -> Tuple[Optional[Dict[str, Any]], Optional[CommandResult]]:
        """
        Apply schema defaults and validate against the command's JSON schema.

        Arguments whose value is None count as not given.

        Returns:
            (args, None) if valid, (None, error_result) otherwise.
        """
        args = {k: v for k, v in raw_kwargs.items() if v is not None}
        for name, schema_prop in command_def.parameters.items():
            if name not in args and "default" in schema_prop:
                args[name] = schema_prop["default"]

        try:
            jsonschema.validate(instance=args, schema=command_def.schema())
        except jsonschema.exceptions.ValidationError as ve:
            usage = command_def.usage_hint or f"See 'cellpm help' for '{command_def.name}'."
            error_path = " -> ".join(map(str, ve.path)) if ve.path else "argument"
            return None, CommandResult(
                False,
                message=f"Invalid argument '{error_path}': {ve.message}. {usage}",
                error=ve,
                input_error=True,
            )
        return args, None

    def execute_command(self, command_name: str, **raw_kwargs: Any) -> CommandResult:
        """
        Execute a command looked up from the registry, with argument validation.
        """
        command_def = get_command(command_name)
        if not command_def:
            return CommandResult(
                False,
                message=f"Unknown command: '{command_name}'. Run 'cellpm help' for a list.",
                input_error=True,
            )

        args, error_result = self._validate_args(command_def, raw_kwargs)
        if error_result:
            return error_result

        try:
            return command_def.handler(**(args or {}))
        except Exception as e_handler:
            logging.error(
                f"Error executing handler for command '{command_def.name}': {e_handler}",
                exc_info=True,
            )
            return CommandResult(
                False,
                message=f"Error during command execution: {str(e_handler)}",
                error=e_handler,
            )
