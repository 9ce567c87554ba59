"""
Command registration for cellpm.

This module registers all commands with the command registry, making them
available to the service and the CLI.
"""

from cellpm.command_registry import register_command

from .help import DEFINITION as help_definition
from .methods import DEFINITION as methods_definition
from .run import DEFINITION as run_definition
from .speedup import DEFINITION as speedup_definition
from .verify import DEFINITION as verify_definition

# List of all command definitions to register
ALL_COMMAND_DEFINITIONS = [
    run_definition,
    verify_definition,
    speedup_definition,
    methods_definition,
    help_definition,
]


def register_all_commands():
    """Register all commands with the registry."""
    for definition in ALL_COMMAND_DEFINITIONS:
        register_command(definition)
