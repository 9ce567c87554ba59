"""
Built-in particle methods.

Importing this package registers every built-in with the method registry.
"""

from cellpm.methods.params import MethodParams
from cellpm.methods.registry import (
    METHOD_REGISTRY,
    MethodDefinition,
    get_method,
    instantiate,
    list_methods,
    register_method,
    resolve_params,
)

from .exchange_diffusion import DEFINITION as exchange_diffusion_definition
from .lattice_walk import DEFINITION as lattice_walk_definition
from .sph_density import DEFINITION as sph_density_definition

ALL_METHOD_DEFINITIONS = [
    exchange_diffusion_definition,
    lattice_walk_definition,
    sph_density_definition,
]


def register_all_methods():
    """Register all built-in method definitions."""
    for method_def in ALL_METHOD_DEFINITIONS:
        register_method(method_def)


register_all_methods()

__all__ = [
    "METHOD_REGISTRY",
    "MethodDefinition",
    "MethodParams",
    "get_method",
    "instantiate",
    "list_methods",
    "register_method",
    "resolve_params",
]
