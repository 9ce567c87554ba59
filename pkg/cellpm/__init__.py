"""
cellpm: particle methods with a sequential and a distributed-memory interpreter.

Initialize the package and register all commands.
"""

from cellpm.commands import register_all_commands
from cellpm.version import __version__

register_all_commands()

__all__ = ["__version__"]
