"""
LatticeWalk: deterministic pseudo-random walk on a dyadic lattice.

Each step a particle moves by an offset derived from a hash of
(seed, id, t), never from its tuple position or owning process, so both
interpreters compute identical motion. Offsets are multiples of a power of
two s with |(s, ..., s)| strictly below r_c, so no move can skip a cell,
and positions stay on the lattice. Interact counts neighbors.
"""

import hashlib
import math
from typing import Dict, Tuple

import numpy as np

from cellpm.methods.params import MethodParams
from cellpm.methods.registry import MethodDefinition, resolve_params
from cellpm.model import AlgorithmSpec, Domain, GlobalVar, Particle, Scalar, distance


def lattice_step(r_c: float, d: int) -> float:
    """Largest power of two s with |(s, ..., s)| < r_c."""
    bound = r_c / math.sqrt(d)
    step = 2.0 ** math.floor(math.log2(bound))
    while step >= bound or distance((step,) * d, (0.0,) * d) >= r_c:
        step /= 2.0
    return step


def hash_offsets(seed: int, particle_id: int, t: int, d: int, resolution: int) -> Tuple[int, ...]:
    """d integers in [-resolution, resolution] from a hash of (seed, id, t)."""
    digest = hashlib.blake2b(f"{seed}:{particle_id}:{t}".encode(), digest_size=2 * d).digest()
    span = 2 * resolution + 1
    return tuple(
        int.from_bytes(digest[2 * l : 2 * l + 2], "big") % span - resolution
        for l in range(d)
    )


def build(params: MethodParams) -> AlgorithmSpec:
    values = resolve_params(params)
    seed = int(values["seed"])
    resolution = int(values["resolution"])
    domain = Domain(params.domain_min, params.domain_max)
    d = domain.d
    unit = lattice_step(params.cutoff, d) / resolution

    def interact(g: GlobalVar, p_j: Particle, p_k: Particle) -> Particle:
        return p_j.with_props(n=p_j.prop("n") + 1)

    def evolve(g: GlobalVar, p: Particle) -> Tuple[Particle, ...]:
        offsets = hash_offsets(seed, p.id, g.t, d, resolution)
        x = domain.clamp(c + o * unit for c, o in zip(p.x, offsets))
        return (p.moved_to(x).with_props(seen=p.prop("n"), n=0),)

    return AlgorithmSpec(
        name="LatticeWalk",
        r_c=params.cutoff,
        interact=interact,
        evolve=evolve,
        exact=True,
        description="Hash-driven walk on a dyadic lattice, clamped into the domain",
    )


def initial_props(rng: np.random.Generator, params: MethodParams) -> Dict[str, Scalar]:
    return {"n": 0, "seen": 0}


DEFINITION = MethodDefinition(
    name="LatticeWalk",
    description="Deterministic hash walk with |step| <= r_c; counts neighbors",
    builder=build,
    exact=True,
    parameters={
        "seed": {
            "type": "integer",
            "minimum": 0,
            "default": 0,
            "description": "Walk seed mixed into the offset hash",
        },
        "resolution": {
            "type": "integer",
            "enum": [1, 2, 4, 8, 16],
            "default": 4,
            "description": "Lattice subdivisions per maximal step",
        },
    },
    initial_props=initial_props,
    prop_names=["n", "seen"],
)
