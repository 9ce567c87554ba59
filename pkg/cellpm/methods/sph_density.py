"""
SphDensity: kernel density summation in floating point.

rho_acc accumulates m * (1 - r / r_c)^2 over neighbors, evolve moves it
into rho. Particles stay put unless a constant velocity is given, in which
case they advance by it each step and are reflected at the domain walls.
Float addition is not associative, so results are compared with a tolerance.
"""

import math
from typing import Dict, Tuple

import numpy as np

from cellpm.exceptions import InstanceFormatError
from cellpm.methods.params import MethodParams
from cellpm.methods.registry import MethodDefinition, resolve_params
from cellpm.model import AlgorithmSpec, Domain, GlobalVar, Particle, Scalar, distance


def kernel(r: float, r_c: float) -> float:
    return (1.0 - r / r_c) ** 2


def build(params: MethodParams) -> AlgorithmSpec:
    values = resolve_params(params)
    mass = float(values["mass"])
    r_c = params.cutoff
    domain = Domain(params.domain_min, params.domain_max)
    velocity = values.get("velocity")
    if velocity is not None:
        velocity = tuple(float(v) for v in velocity)
        if len(velocity) != domain.d:
            raise InstanceFormatError(
                f"velocity needs {domain.d} components, got {len(velocity)}",
                field="method.params.velocity",
            )
        if math.hypot(*velocity) > r_c:
            raise InstanceFormatError(
                f"|velocity| must not exceed r_c={r_c}", field="method.params.velocity"
            )

    def interact(g: GlobalVar, p_j: Particle, p_k: Particle) -> Particle:
        w = mass * kernel(distance(p_j.x, p_k.x), r_c)
        return p_j.with_props(rho_acc=p_j.prop("rho_acc") + w)

    def evolve(g: GlobalVar, p: Particle) -> Tuple[Particle, ...]:
        evolved = p.with_props(rho=p.prop("rho_acc"), rho_acc=0.0)
        if velocity is not None:
            evolved = evolved.moved_to(
                domain.reflect(c + v for c, v in zip(p.x, velocity))
            )
        return (evolved,)

    return AlgorithmSpec(
        name="SphDensity",
        r_c=r_c,
        interact=interact,
        evolve=evolve,
        exact=False,
        description="Kernel density summation (float, tolerance-compared)",
    )


def initial_props(rng: np.random.Generator, params: MethodParams) -> Dict[str, Scalar]:
    return {"rho": 0.0, "rho_acc": 0.0}


DEFINITION = MethodDefinition(
    name="SphDensity",
    description="Density sum rho = sum m (1 - r/r_c)^2 with optional constant drift",
    builder=build,
    exact=False,
    parameters={
        "mass": {
            "type": "number",
            "exclusiveMinimum": 0,
            "default": 1.0,
            "description": "Kernel mass m",
        },
        "velocity": {
            "type": "array",
            "items": {"type": "number"},
            "minItems": 1,
            "description": "Constant drift per step, |v| <= r_c",
        },
    },
    initial_props=initial_props,
    prop_names=["rho", "rho_acc"],
)
