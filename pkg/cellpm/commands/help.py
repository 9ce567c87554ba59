"""
Command handler for displaying help information.
"""

from typing import Any

from cellpm.command_registry import CommandDefinition, get_commands

from .base import CommandResult


def handle_command(**kwargs: Any) -> CommandResult:
    """List the available commands with their usage lines."""
    commands = [
        {
            "name": name,
            "description": command_def.description,
            "usage": command_def.usage_hint or f"Usage: cellpm {name}",
        }
        for name, command_def in get_commands().items()
    ]
    return CommandResult(True, data={"commands": commands})


DEFINITION = CommandDefinition(
    name="help",
    description="Display help information about available commands",
    handler=handle_command,
    parameters={},
    required_params=[],
)
