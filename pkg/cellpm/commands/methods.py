"""
Command handler for listing the built-in particle methods.
"""

from typing import Any

from cellpm.command_registry import CommandDefinition
from cellpm.methods import get_method, list_methods

from .base import CommandResult


def handle_command(**kwargs: Any) -> CommandResult:
    """List every registered method with its exactness, properties and parameters."""
    rows = []
    for name in list_methods():
        method_def = get_method(name)
        rows.append(
            {
                "name": name,
                "exact": method_def.exact,
                "description": method_def.description,
                "props": list(method_def.prop_names),
                "parameters": {
                    param: {
                        key: value
                        for key, value in schema.items()
                        if key in ("type", "default", "description")
                    }
                    for param, schema in method_def.parameters.items()
                },
            }
        )
    return CommandResult(True, data={"methods": rows}, message=f"{len(rows)} built-in methods")


DEFINITION = CommandDefinition(
    name="methods",
    description="List the built-in particle methods and their parameters",
    handler=handle_command,
    parameters={},
    required_params=[],
)
