"""
Instance files and state dumps.

Instance files are JSON documents validated with a JSON schema before they
are turned into an `Instance`. Dumps sort particles by id and write every
number with the shortest repr that round-trips, so dump -> load -> dump is
byte-identical and digests can be compared across interpreters.
"""

import hashlib
import json
import logging
from decimal import Decimal
from pathlib import Path
from typing import Any, Dict, Iterable, List, Sequence, Union

import jsonschema
from pydantic import ValidationError

from cellpm.cell_grid import DistributedState
from cellpm.exceptions import InstanceFormatError
from cellpm.model import GlobalVar, Instance, Particle, State

_NUMBER = {"type": "number"}
_VECTOR = {"type": "array", "items": _NUMBER, "minItems": 1}

INSTANCE_SCHEMA: Dict[str, Any] = {
    "type": "object",
    "required": ["dimension", "domain", "cutoff", "method", "particles"],
    "properties": {
        "dimension": {"type": "integer", "minimum": 1},
        "domain": {
            "type": "object",
            "required": ["min", "max"],
            "properties": {"min": _VECTOR, "max": _VECTOR},
            "additionalProperties": False,
        },
        "cutoff": {"type": "number", "exclusiveMinimum": 0},
        "method": {
            "type": "object",
            "required": ["name"],
            "properties": {
                "name": {"type": "string"},
                "params": {"type": "object"},
            },
            "additionalProperties": False,
        },
        "global": {
            "type": "object",
            "properties": {
                "t": {"type": "integer", "minimum": 1},
                "t_max": {"type": "integer", "minimum": 1},
            },
            "additionalProperties": _NUMBER,
        },
        "particles": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "x"],
                "properties": {
                    "id": {"type": "integer", "minimum": 0},
                    "x": _VECTOR,
                    "props": {"type": "object", "additionalProperties": _NUMBER},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

Document = Dict[str, Any]


def _field_path(path: Iterable[Any]) -> str:
    return ".".join(str(part) for part in path) or "<root>"


def _to_python(value: Any) -> Any:
    """Turn Decimal leaves from the parser into floats, keeping ints as ints."""
    if isinstance(value, Decimal):
        return float(value)
    if isinstance(value, list):
        return [_to_python(v) for v in value]
    if isinstance(value, dict):
        return {k: _to_python(v) for k, v in value.items()}
    return value


def _inexact_fields(value: Any, path: List[Any]) -> Iterable[str]:
    """Field paths of decimal literals that no double represents exactly."""
    if isinstance(value, Decimal):
        if value.is_finite() and Decimal(float(value)) != value:
            yield _field_path(path)
    elif isinstance(value, list):
        for i, v in enumerate(value):
            yield from _inexact_fields(v, path + [i])
    elif isinstance(value, dict):
        for k, v in value.items():
            yield from _inexact_fields(v, path + [k])


def parse_instance_text(text: str) -> Document:
    """Parse and schema-check an instance document, keeping decimal literals."""
    try:
        raw = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(
            f"Malformed JSON at line {e.lineno} column {e.colno}: {e.msg}", field="<root>"
        ) from e

    try:
        jsonschema.validate(instance=_to_python(raw), schema=INSTANCE_SCHEMA)
    except jsonschema.exceptions.ValidationError as ve:
        field = _field_path(ve.absolute_path)
        raise InstanceFormatError(f"Invalid field '{field}': {ve.message}", field=field) from ve
    return raw


def instance_from_document(raw: Document) -> Instance:
    """Build an Instance from a parsed document (Decimal or float numbers)."""
    from cellpm.methods import MethodParams, get_method

    method_def = get_method(raw["method"]["name"])
    if method_def.exact:
        inexact = [
            f
            for i, p in enumerate(raw["particles"])
            for f in _inexact_fields(p["x"], ["particles", i, "x"])
        ]
        if inexact:
            raise InstanceFormatError(
                f"{method_def.name} is exact but position {inexact[0]} is not a binary "
                f"fraction ({len(inexact)} such coordinates)",
                field=inexact[0],
            )

    doc = _to_python(raw)
    d = doc["dimension"]
    for name in ("min", "max"):
        if len(doc["domain"][name]) != d:
            raise InstanceFormatError(
                f"domain.{name} has {len(doc['domain'][name])} entries, dimension is {d}",
                field=f"domain.{name}",
            )

    global_doc = dict(doc.get("global", {}))
    t = global_doc.pop("t", 1)
    t_max = global_doc.pop("t_max", 1)
    try:
        method = MethodParams(
            name=doc["method"]["name"],
            cutoff=doc["cutoff"],
            domain_min=tuple(doc["domain"]["min"]),
            domain_max=tuple(doc["domain"]["max"]),
            t_max=t_max,
            params=doc["method"].get("params", {}),
        )
    except ValidationError as e:
        raise InstanceFormatError(f"Invalid method block: {e}", field="method") from e

    particles = []
    for i, p in enumerate(doc["particles"]):
        if len(p["x"]) != d:
            raise InstanceFormatError(
                f"Particle {p['id']} has {len(p['x'])} coordinates, dimension is {d}",
                field=f"particles.{i}.x",
            )
        particles.append(Particle(id=p["id"], x=tuple(p["x"]), props=p.get("props", {})))

    g = GlobalVar(t=t, t_max=t_max, extras=global_doc)
    # State and Instance raise on duplicate ids and out-of-domain positions.
    return Instance(state=State(g=g, particles=tuple(particles)), method=method)


def loads_instance(text: str) -> Instance:
    return instance_from_document(parse_instance_text(text))


def load_instance(path: Union[str, Path]) -> Instance:
    """Read, validate and build an instance file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as e:
        raise InstanceFormatError(f"Cannot read instance file {path}: {e}") from e
    instance = loads_instance(text)
    logging.debug(
        f"Loaded {instance.method.name} instance from {path}: "
        f"{len(instance.state)} particles, d={instance.d}"
    )
    return instance


def particle_document(p: Particle) -> Document:
    return {"id": p.id, "x": list(p.x), "props": dict(p.props)}


def global_document(g: GlobalVar) -> Document:
    return {"t": g.t, "t_max": g.t_max, **dict(g.extras)}


def _sorted(particles: Sequence[Particle]) -> List[Particle]:
    return sorted(particles, key=lambda p: p.id)


def instance_document(instance: Instance) -> Document:
    method = instance.method
    return {
        "dimension": instance.d,
        "domain": {"min": list(method.domain_min), "max": list(method.domain_max)},
        "cutoff": method.cutoff,
        "method": {"name": method.name, "params": dict(method.params)},
        "global": global_document(instance.state.g),
        "particles": [particle_document(p) for p in _sorted(instance.state.particles)],
    }


def dumps_instance(instance: Instance) -> str:
    return json.dumps(instance_document(instance), indent=2, allow_nan=False) + "\n"


def _state_parts(state: Union[State, DistributedState]):
    if isinstance(state, DistributedState):
        return state.g, state.center_particles()
    return state.g, state.particles


def state_document(state: Union[State, DistributedState]) -> Document:
    """Canonical dump of a final state; a distributed state contributes its centers."""
    g, particles = _state_parts(state)
    return {
        "global": global_document(g),
        "particles": [particle_document(p) for p in _sorted(particles)],
    }


def dumps_state(state: Union[State, DistributedState], *, compact: bool = False) -> str:
    if compact:
        return json.dumps(state_document(state), separators=(",", ":"), allow_nan=False)
    return json.dumps(state_document(state), indent=2, allow_nan=False) + "\n"


def state_digest(state: Union[State, DistributedState]) -> str:
    """sha256 of the compact canonical dump."""
    return hashlib.sha256(dumps_state(state, compact=True).encode()).hexdigest()


def write_json(path: Union[str, Path], document: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(document, indent=2, allow_nan=False, default=str) + "\n")
    return path


def write_state(path: Union[str, Path], state: Union[State, DistributedState]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_state(state))
    return path


def write_trace(
    path: Union[str, Path], states: Iterable[Union[State, DistributedState]]
) -> Path:
    """One compact canonical state dump per line."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w") as f:
        for state in states:
            f.write(dumps_state(state, compact=True) + "\n")
    return path
