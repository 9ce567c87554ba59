"""Instance builders shared by the tests."""

import json
from pathlib import Path
from typing import Any, Dict, Iterable, Optional, Tuple

from cellpm.methods import MethodParams
from cellpm.model import AlgorithmSpec, GlobalVar, Instance, Particle, State
from cellpm.serialization import dumps_instance


def exchange_instance(
    positions: Iterable[Tuple[float, ...]],
    h: Iterable[int],
    *,
    d_min: Tuple[float, ...],
    d_max: Tuple[float, ...],
    r_c: float = 1.0,
    t_max: int = 2,
) -> Instance:
    particles = tuple(
        Particle(id=i, x=x, props={"h": value, "a": 0, "c": 0})
        for i, (x, value) in enumerate(zip(positions, h))
    )
    return Instance(
        state=State(g=GlobalVar(t=1, t_max=t_max), particles=particles),
        method=MethodParams(
            name="ExchangeDiffusion",
            cutoff=r_c,
            domain_min=d_min,
            domain_max=d_max,
            t_max=t_max,
        ),
    )


def swap_instance(t_max: int = 2) -> Instance:
    """Two mutual neighbors at 0.25 and 0.75 in [0, 1), r_c=1: h swaps every step."""
    return exchange_instance(
        [(0.25,), (0.75,)], [10, 4], d_min=(0.0,), d_max=(1.0,), t_max=t_max
    )


def instance_document(
    *,
    method: str = "ExchangeDiffusion",
    particles: Optional[list] = None,
    params: Optional[Dict[str, Any]] = None,
    t_max: int = 2,
) -> Dict[str, Any]:
    """A minimal 1-D instance document for file-format tests."""
    return {
        "dimension": 1,
        "domain": {"min": [0.0], "max": [1.0]},
        "cutoff": 1.0,
        "method": {"name": method, "params": params or {}},
        "global": {"t": 1, "t_max": t_max},
        "particles": particles
        if particles is not None
        else [
            {"id": 0, "x": [0.25], "props": {"h": 10, "a": 0, "c": 0}},
            {"id": 1, "x": [0.75], "props": {"h": 4, "a": 0, "c": 0}},
        ],
    }


def write_instance_file(path: Path, instance: Instance) -> Path:
    path.write_text(dumps_instance(instance))
    return path


def write_document(path: Path, document: Any) -> Path:
    path.write_text(json.dumps(document))
    return path


def drift_spec(step: float, r_c: float = 1.0) -> AlgorithmSpec:
    """Every particle moves by `step` along the first axis; no interaction."""

    def evolve(g, p):
        return (p.moved_to((p.x[0] + step,) + p.x[1:]),)

    return AlgorithmSpec(
        name="Drift", r_c=r_c, interact=lambda g, p_j, p_k: p_j, evolve=evolve
    )
