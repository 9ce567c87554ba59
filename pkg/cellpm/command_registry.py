"""
Registry of the commands the CLI exposes.

Each command module exports a `DEFINITION`; `cellpm.commands` registers them
all. The service looks commands up here and validates arguments against the
JSON schema `parameters` block before calling the handler.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional


@dataclass
class CommandDefinition:
    """
    Definition for a CLI command.

    Attributes:
        name: Command name as typed on the command line
        description: Human-readable description of the command
        handler: Function that implements the command logic (keyword arguments only)
        parameters: JSON Schema compatible parameter definitions
        required_params: List of required parameter names
        usage_hint: Optional usage line shown with argument errors
    """

    name: str
    description: str
    handler: Callable
    parameters: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    required_params: List[str] = field(default_factory=list)
    usage_hint: Optional[str] = None

    def schema(self) -> Dict[str, Any]:
        return {
            "type": "object",
            "properties": self.parameters,
            "required": self.required_params,
            "additionalProperties": False,
        }


# Command registry - populated with all available commands
COMMAND_REGISTRY: Dict[str, CommandDefinition] = {}


def register_command(command_def: CommandDefinition) -> None:
    COMMAND_REGISTRY[command_def.name] = command_def


def get_command(name: str) -> Optional[CommandDefinition]:
    """Look a command up by name; None if it is not registered."""
    return COMMAND_REGISTRY.get(name)


def get_commands() -> Dict[str, CommandDefinition]:
    return dict(sorted(COMMAND_REGISTRY.items()))
