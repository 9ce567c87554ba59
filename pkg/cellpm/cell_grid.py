"""
Cell grid construction and the initial distributed state.

The grid has cells of side r_c over [D_min, D_max); each cell is owned by
exactly one simulated process. A process stores its particles in 3^d
compartments: the center compartment holds the particles of its own cell,
the others hold ghost copies of the neighboring cells (or particles on their
way out during redistribution).
"""

import logging
from dataclasses import dataclass, replace
from typing import Dict, Iterator, List, Sequence, Tuple

from cellpm.exceptions import DomainViolationError, IndexRangeError
from cellpm.index_space import (
    GridDims,
    cell_coords,
    cell_floor,
    cell_count,
    center_compartment,
    grid_dims,
    pattern_count,
    to_scalar,
)
from cellpm.model import Domain, GlobalVar, Instance, Particle, Position

Compartment = Tuple[Particle, ...]


@dataclass(frozen=True)
class CellGrid:
    """Cell-list parameters: domain bounds, cutoff, dimension and cell counts."""

    d_min: Position
    d_max: Position
    r_c: float
    I: GridDims

    @property
    def d(self) -> int:
        return len(self.I)

    @property
    def n_cell(self) -> int:
        return cell_count(self.I)

    @property
    def n_compartments(self) -> int:
        return pattern_count(self.d)

    @property
    def center(self) -> int:
        return center_compartment(self.d)

    @property
    def domain(self) -> Domain:
        return Domain(self.d_min, self.d_max)


def build_grid(
    d_min: Sequence[float], d_max: Sequence[float], r_c: float, d: int | None = None
) -> CellGrid:
    """Build the grid with I = floor((D_max - D_min) / r_c + 1) per dimension."""
    if d is None:
        d = len(d_min)
    if len(d_min) != d or len(d_max) != d:
        raise ValueError(f"Domain bounds must have {d} entries")
    if not r_c > 0:
        raise ValueError(f"Cutoff radius must be positive, got {r_c}")
    extents = [hi - lo for lo, hi in zip(d_min, d_max)]
    if any(not e > 0 for e in extents):
        raise ValueError(f"Domain extent must be positive, got {extents}")
    I = grid_dims(cell_floor(hi, lo, r_c) + 1 for lo, hi in zip(d_min, d_max))
    grid = CellGrid(
        d_min=tuple(float(c) for c in d_min),
        d_max=tuple(float(c) for c in d_max),
        r_c=float(r_c),
        I=I,
    )
    logging.debug(f"Built cell grid I={I} (N_cell={grid.n_cell}) for r_c={r_c}")
    return grid


def grid_for(instance: Instance) -> CellGrid:
    return build_grid(instance.domain.d_min, instance.domain.d_max, instance.r_c)


def cell_of(x: Sequence[float], grid: CellGrid) -> int:
    """Scalar index of the cell containing x."""
    if len(x) != grid.d or not grid.domain.contains(tuple(x)):
        raise DomainViolationError(
            f"Position {tuple(x)} outside the domain [{grid.d_min}, {grid.d_max})"
        )
    vec = tuple(c + 1 for c in cell_coords(x, grid.d_min, grid.r_c))
    try:
        return to_scalar(vec, grid.I)
    except IndexRangeError as e:
        raise DomainViolationError(
            f"Position {tuple(x)} maps to cell {vec} outside I={grid.I}"
        ) from e


@dataclass(frozen=True)
class ProcessStorage:
    """One process's copy of g and its 3^d particle compartments (1-based)."""

    g: GlobalVar
    compartments: Tuple[Compartment, ...]

    @classmethod
    def empty(cls, g: GlobalVar, d: int) -> "ProcessStorage":
        return cls(g=g, compartments=((),) * pattern_count(d))

    @property
    def center_index(self) -> int:
        return (len(self.compartments) + 1) // 2

    @property
    def center(self) -> Compartment:
        return self.compartments[self.center_index - 1]

    def compartment(self, l: int) -> Compartment:
        return self.compartments[l - 1]

    def with_compartment(self, l: int, particles: Sequence[Particle]) -> "ProcessStorage":
        compartments = list(self.compartments)
        compartments[l - 1] = tuple(particles)
        return replace(self, compartments=tuple(compartments))

    def with_center(self, particles: Sequence[Particle]) -> "ProcessStorage":
        return self.with_compartment(self.center_index, particles)

    def local_particles(self) -> Tuple[Particle, ...]:
        """All compartments concatenated in compartment order."""
        return tuple(p for compartment in self.compartments for p in compartment)

    def compartment_sizes(self) -> Tuple[int, ...]:
        return tuple(len(c) for c in self.compartments)


@dataclass(frozen=True)
class DistributedState:
    """The storages of all N_cell processes, indexed 1..N_cell."""

    storages: Tuple[ProcessStorage, ...]

    @property
    def n_cell(self) -> int:
        return len(self.storages)

    @property
    def globals(self) -> Tuple[GlobalVar, ...]:
        return tuple(s.g for s in self.storages)

    @property
    def g(self) -> GlobalVar:
        """The first process's global variable."""
        return self.storages[0].g

    def process(self, w: int) -> ProcessStorage:
        return self.storages[w - 1]

    def __iter__(self) -> Iterator[ProcessStorage]:
        return iter(self.storages)

    def center_particles(self) -> Tuple[Particle, ...]:
        """Concatenation of all center compartments in process order."""
        return tuple(p for s in self.storages for p in s.center)

    def with_storages(self, storages: Sequence[ProcessStorage]) -> "DistributedState":
        return replace(self, storages=tuple(storages))


def distribute_initial(instance: Instance, grid: CellGrid) -> DistributedState:
    """Place every particle into the center compartment of the process owning its cell."""
    buckets: Dict[int, List[Particle]] = {}
    for p in instance.state.particles:
        buckets.setdefault(cell_of(p.x, grid), []).append(p)

    g = instance.state.g
    storages = []
    for w in range(1, grid.n_cell + 1):
        storage = ProcessStorage.empty(g, grid.d)
        if w in buckets:
            storage = storage.with_center(buckets[w])
        storages.append(storage)
    logging.debug(
        f"Distributed {len(instance.state)} particles over {grid.n_cell} processes"
    )
    return DistributedState(storages=tuple(storages))
