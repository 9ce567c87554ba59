"""
ExchangeDiffusion: integer exchange of a scalar between neighbors.

Every particle pulls the value h of each neighbor into an accumulator a and
counts its neighbors in c; evolve applies h <- h + (a - c*h) and resets both
accumulators. A pair of particles that only see each other swaps values
each step.
All arithmetic is on Python integers, so the result does not depend on the
order in which neighbors are visited.
"""

from typing import Dict, Tuple

import numpy as np

from cellpm.methods.params import MethodParams
from cellpm.methods.registry import MethodDefinition
from cellpm.model import AlgorithmSpec, GlobalVar, Particle, Scalar


def interact(g: GlobalVar, p_j: Particle, p_k: Particle) -> Particle:
    return p_j.with_props(a=p_j.prop("a") + p_k.prop("h"), c=p_j.prop("c") + 1)


def evolve(g: GlobalVar, p: Particle) -> Tuple[Particle, ...]:
    h = p.prop("h")
    return (p.with_props(h=h + (p.prop("a") - p.prop("c") * h), a=0, c=0),)


def build(params: MethodParams) -> AlgorithmSpec:
    return AlgorithmSpec(
        name="ExchangeDiffusion",
        r_c=params.cutoff,
        interact=interact,
        evolve=evolve,
        exact=True,
        description="Integer neighbor exchange; mutual neighbor pairs swap h",
    )


def initial_props(rng: np.random.Generator, params: MethodParams) -> Dict[str, Scalar]:
    high = int(params.params.get("h_max", 100))
    return {"h": int(rng.integers(0, high + 1)), "a": 0, "c": 0}


DEFINITION = MethodDefinition(
    name="ExchangeDiffusion",
    description="Integer exchange of h between neighbors (h <- h + sum(h_k) - c*h)",
    builder=build,
    exact=True,
    parameters={
        "h_max": {
            "type": "integer",
            "minimum": 0,
            "default": 100,
            "description": "Upper bound of the random initial h",
        }
    },
    initial_props=initial_props,
    prop_names=["h", "a", "c"],
)
