"""
Registry of built-in particle methods.

Each method module exports a `DEFINITION`; `cellpm.methods` registers them
all on import. Method-specific parameters are described with a JSON schema
block and validated before the algorithm is built.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import jsonschema
import numpy as np

from cellpm.exceptions import InstanceFormatError, UnknownMethodError
from cellpm.methods.params import MethodParams
from cellpm.model import AlgorithmSpec, Scalar


@dataclass
class MethodDefinition:
    """
    Definition of a built-in particle method.

    Attributes:
        name: Registered method name
        description: Human-readable description
        builder: Builds the AlgorithmSpec from validated parameters
        exact: Whether all property arithmetic is exact (integer or dyadic)
        parameters: JSON Schema property definitions for MethodParams.params
        initial_props: Draws the initial properties of one particle
        prop_names: Particle properties the method reads and writes
    """

    name: str
    description: str
    builder: Callable[[MethodParams], AlgorithmSpec]
    exact: bool = True
    parameters: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    initial_props: Optional[
        Callable[[np.random.Generator, MethodParams], Dict[str, Scalar]]
    ] = None
    prop_names: List[str] = field(default_factory=list)

    def defaults(self) -> Dict[str, Any]:
        return {
            name: schema["default"]
            for name, schema in self.parameters.items()
            if "default" in schema
        }


METHOD_REGISTRY: Dict[str, MethodDefinition] = {}


def register_method(method_def: MethodDefinition) -> None:
    METHOD_REGISTRY[method_def.name] = method_def


def get_method(name: str) -> MethodDefinition:
    """
    Look up a method by name.

    Raises:
        UnknownMethodError: if no method of that name is registered
    """
    if name not in METHOD_REGISTRY:
        raise UnknownMethodError(
            f"Unknown method '{name}'. Available: {', '.join(list_methods())}"
        )
    return METHOD_REGISTRY[name]


def list_methods() -> List[str]:
    """Registered method names in a stable (alphabetical) order."""
    return sorted(METHOD_REGISTRY)


def resolve_params(params: MethodParams) -> Dict[str, Any]:
    """Validate the method-specific scalars and fill in defaults."""
    method_def = get_method(params.name)
    schema = {
        "type": "object",
        "properties": method_def.parameters,
        "additionalProperties": False,
    }
    jsonschema.validate(instance=params.params, schema=schema)
    resolved = method_def.defaults()
    resolved.update(params.params)
    return resolved


def instantiate(params: MethodParams) -> AlgorithmSpec:
    """Build the algorithm of a registered method."""
    method_def = get_method(params.name)
    try:
        resolve_params(params)
    except jsonschema.exceptions.ValidationError as e:
        raise InstanceFormatError(
            f"Invalid parameters for {params.name}: {e.message}", field="method.params"
        ) from e
    spec = method_def.builder(params)
    logging.debug(f"Instantiated {params.name} with r_c={params.cutoff}")
    return spec
