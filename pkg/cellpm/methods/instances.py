"""
Seeded random instances of the built-in methods.
"""

import logging
import math
from typing import Any, Dict, Optional, Union

import numpy as np

from cellpm.cell_grid import CellGrid
from cellpm.methods.params import MethodParams
from cellpm.methods.registry import get_method
from cellpm.model import GlobalVar, Instance, Particle, State

# Positions of exact methods are multiples of 2**-DYADIC_BITS from D_min.
DYADIC_BITS = 16


def dyadic_positions(
    rng: np.random.Generator, grid: CellGrid, n: int
) -> np.ndarray:
    """n positions uniform on the 2**-DYADIC_BITS lattice inside the domain."""
    scale = 2.0**DYADIC_BITS
    columns = []
    for lo, hi in zip(grid.d_min, grid.d_max):
        slots = max(1, math.floor((hi - lo) * scale))
        columns.append(lo + rng.integers(0, slots, size=n) / scale)
    return np.stack(columns, axis=1) if columns else np.zeros((n, 0))


def random_instance(
    method: Union[str, MethodParams],
    seed: int,
    grid: CellGrid,
    n_particles: int,
    *,
    t_max: int = 2,
    params: Optional[Dict[str, Any]] = None,
) -> Instance:
    """
    Draw a reproducible instance on the domain and cutoff of `grid`.

    Exact methods get dyadic positions so position arithmetic never rounds;
    the float method gets uniform doubles.
    """
    if n_particles < 0:
        raise ValueError(f"n_particles must be non-negative, got {n_particles}")

    if isinstance(method, MethodParams):
        method_params = method
    else:
        method_params = MethodParams(
            name=method,
            cutoff=grid.r_c,
            domain_min=grid.d_min,
            domain_max=grid.d_max,
            t_max=t_max,
            params=params or {},
        )
    method_def = get_method(method_params.name)

    rng = np.random.default_rng(seed)
    if method_def.exact:
        positions = dyadic_positions(rng, grid, n_particles)
    else:
        positions = rng.uniform(grid.d_min, grid.d_max, size=(n_particles, grid.d))

    domain = grid.domain
    particles = []
    for i in range(n_particles):
        props = method_def.initial_props(rng, method_params) if method_def.initial_props else {}
        x = domain.clamp(float(c) for c in positions[i])
        particles.append(Particle(id=i, x=x, props=props))

    logging.debug(
        f"Random {method_params.name} instance: seed={seed}, n={n_particles}, I={grid.I}"
    )
    return Instance(
        state=State(g=GlobalVar(t=1, t_max=method_params.t_max), particles=tuple(particles)),
        method=method_params,
    )
