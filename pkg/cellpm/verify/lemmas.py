"""
Brute-force checks of the index and runtime guarantees over families of grids.

Index-level properties (translation round trip, conflict-free checkerboard
phases, gamma enumerating every process once) are checked exhaustively with
numpy over every grid shape with at most `max_cells` cells. Runtime
properties (ghost completeness, compartment range, empty out-of-domain
compartments, placement after collect) are checked by running the real
pipeline on every small shape plus a seeded sample of larger ones, with
particles fuzzed onto cell and domain borders.
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Iterator, List, Sequence, Tuple

import numpy as np

from cellpm.cell_grid import (
    CellGrid,
    DistributedState,
    ProcessStorage,
    build_grid,
    cell_of,
    distribute_initial,
)
from cellpm.exceptions import ConstraintViolationError
from cellpm.index_space import (
    DEFAULT_ADDRESSING,
    Addressing,
    active_process_array,
    cell_count,
    neighbor_process,
    pattern_count,
    to_scalar_batch,
    to_vec_batch,
)
from cellpm.methods import MethodParams, instantiate
from cellpm.model import GlobalVar, Instance, Particle, State, within_cutoff
from cellpm.runtime.comm import CommLog, audit_communications
from cellpm.runtime.pipeline import collect_all, copy_all, dist_all, step_all

ROUND_TRIP = "index round trip"
CONFLICT_FREE = "conflict-free phases"
GAMMA_BIJECTIVE = "gamma bijective"
GHOST_COMPLETE = "ghost completeness"
COMPARTMENT_RANGE = "compartment range"
BORDER_EMPTY = "out-of-domain compartments empty"
PLACEMENT = "placement after collect"

LEMMA_ORDER = (
    ROUND_TRIP,
    CONFLICT_FREE,
    GAMMA_BIJECTIVE,
    GHOST_COMPLETE,
    COMPARTMENT_RANGE,
    BORDER_EMPTY,
    PLACEMENT,
)

MAX_RECORDED_FAILURES = 10

# shape x index elements per numpy batch of the round trip
ROUND_TRIP_BATCH = 1 << 20


@dataclass
class LemmaResult:
    name: str
    checked: int = 0
    failure_count: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.failure_count == 0

    def fail(self, detail: str) -> None:
        self.failure_count += 1
        if len(self.failures) < MAX_RECORDED_FAILURES:
            self.failures.append(detail)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "checked": self.checked,
            "ok": self.ok,
            "failure_count": self.failure_count,
            "failures": self.failures,
        }


@dataclass
class LemmaReport:
    max_cells: int
    dims: Tuple[int, ...]
    results: Dict[str, LemmaResult] = field(
        default_factory=lambda: {name: LemmaResult(name) for name in LEMMA_ORDER}
    )
    shapes: int = 0
    runtime_shapes: int = 0

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results.values())

    def __getitem__(self, name: str) -> LemmaResult:
        return self.results[name]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_cells": self.max_cells,
            "dims": list(self.dims),
            "shapes": self.shapes,
            "runtime_shapes": self.runtime_shapes,
            "ok": self.ok,
            "lemmas": [self.results[name].to_dict() for name in LEMMA_ORDER],
        }


def grid_shapes(d: int, max_cells: int) -> Iterator[Tuple[int, ...]]:
    """Every I in dimension d with prod(I) <= max_cells, in lexicographic order."""
    if d == 0:
        yield ()
        return
    for first in range(1, max_cells + 1):
        for rest in grid_shapes(d - 1, max_cells // first):
            yield (first,) + rest


# index-level checks


def check_round_trip(shapes: Iterable[Sequence[int]], result: LemmaResult) -> None:
    """
    to_scalar(to_vec(j)) == j for every j in [1, prod(I)], with every to_vec(j)
    inside the box [1, I]. Together these make to_vec and to_scalar inverse
    bijections. Shapes are checked in numpy batches of equal dimension and
    cell count.
    """
    groups: Dict[Tuple[int, int], List[Tuple[int, ...]]] = defaultdict(list)
    for I in shapes:
        groups[(len(I), cell_count(I))].append(tuple(I))

    for (_, n), group in sorted(groups.items()):
        j = np.arange(1, n + 1, dtype=np.int64)
        step = max(1, ROUND_TRIP_BATCH // n)
        for start in range(0, len(group), step):
            batch = np.array(group[start : start + step], dtype=np.int64)
            vecs = to_vec_batch(j, batch)
            inside = ((vecs >= 1) & (vecs <= batch[:, None, :])).all(axis=(1, 2))
            exact = (to_scalar_batch(vecs, batch) == j).all(axis=1)
            for row in np.flatnonzero(~(inside & exact)):
                I = tuple(int(i) for i in batch[row])
                result.fail(f"I={I}: to_vec and to_scalar are not inverse on [1, {n}]")
            result.checked += 2 * n * len(batch)


def pattern_labels(I: Sequence[int], result: LemmaResult) -> np.ndarray:
    """
    Pattern index of every process, read off gamma; also checks that gamma
    enumerates every process exactly once.
    """
    n = cell_count(I)
    labels = np.zeros(n, dtype=np.int64)
    gathered = []
    for k in range(1, pattern_count(len(I)) + 1):
        active = active_process_array(k, I)
        labels[active - 1] = k
        gathered.append(active)
    everyone = np.concatenate(gathered)
    if everyone.size != n or not np.array_equal(np.sort(everyone), np.arange(1, n + 1)):
        result.fail(f"I={tuple(I)}: gamma does not enumerate 1..{n} exactly once")
    result.checked += n
    return labels


def check_conflict_free(
    I: Sequence[int],
    labels: np.ndarray,
    result: LemmaResult,
    addressing: Addressing = DEFAULT_ADDRESSING,
) -> None:
    """
    Within each pattern, no process is reached by two readers and no reader
    is reached by another reader.

    Every process reads in exactly one pattern (its label), so all patterns
    are checked at once on the full (process, compartment) table.
    """
    n = cell_count(I)
    processes = np.arange(1, n + 1, dtype=np.int64)
    all_l = np.arange(1, pattern_count(len(I)) + 1, dtype=np.int64)
    targets = addressing.beta_array(processes, all_l, I)
    defined = (targets >= 1) & (targets <= n)
    if not defined.any():
        return
    target = targets[defined]
    owner = np.broadcast_to(processes[:, None], targets.shape)[defined]
    phase = labels[owner - 1]

    # (phase, target) keys reached by more than one distinct owner
    key = phase * (n + 1) + target
    pairs = np.unique(key * (n + 1) + owner)
    pair_keys, counts = np.unique(pairs // (n + 1), return_counts=True)
    for shared in pair_keys[counts > 1][:MAX_RECORDED_FAILURES]:
        k, w = divmod(int(shared), n + 1)
        result.fail(f"I={tuple(I)}, k={k}: process {w} reached by several readers")

    hits = (target != owner) & (labels[target - 1] == phase)
    for w, k in zip(target[hits][:MAX_RECORDED_FAILURES], phase[hits]):
        result.fail(f"I={tuple(I)}, k={int(k)}: reader {int(w)} is reached by another reader")
    result.checked += int(defined.sum())


# runtime checks


def lemma_grid(I: Sequence[int], r_c: float = 1.0) -> CellGrid:
    """A grid with exactly I cells: the last cell in each dimension is half filled."""
    d_max = tuple(r_c * (i - 0.5) for i in I)
    grid = build_grid((0.0,) * len(I), d_max, r_c)
    if grid.I != tuple(I):
        raise ValueError(f"Cannot build a grid with I={tuple(I)}")
    return grid


def fuzz_positions(grid: CellGrid, rng: np.random.Generator) -> List[Tuple[float, ...]]:
    """Positions on domain walls and on both sides of every interior cell boundary."""
    positions = []
    for axis in range(grid.d):
        base = [float(rng.uniform(lo, hi)) for lo, hi in zip(grid.d_min, grid.d_max)]
        lo, hi = grid.d_min[axis], grid.d_max[axis]
        coords = [lo, math.nextafter(hi, -math.inf)]
        for b in range(1, grid.I[axis]):
            boundary = lo + b * grid.r_c
            if boundary < hi:
                coords.extend([boundary, math.nextafter(boundary, -math.inf)])
        for c in coords:
            x = list(base)
            x[axis] = c
            positions.append(tuple(x))
    return positions


def lemma_instance(grid: CellGrid, seed: int, t_max: int = 3) -> Instance:
    """A LatticeWalk instance with random and border-fuzzed particles."""
    rng = np.random.default_rng(seed)
    n_random = min(2 * grid.n_cell, 200)
    positions = [
        tuple(float(c) for c in rng.uniform(grid.d_min, grid.d_max))
        for _ in range(n_random)
    ]
    positions.extend(fuzz_positions(grid, rng))
    domain = grid.domain
    particles = tuple(
        Particle(id=i, x=domain.clamp(x), props={"n": 0, "seen": 0})
        for i, x in enumerate(positions)
    )
    params = MethodParams(
        name="LatticeWalk",
        cutoff=grid.r_c,
        domain_min=grid.d_min,
        domain_max=grid.d_max,
        t_max=t_max,
        params={"seed": seed},
    )
    return Instance(state=State(g=GlobalVar(t=1, t_max=t_max), particles=particles), method=params)


def _check_ghosts(state: DistributedState, grid: CellGrid, result: LemmaResult) -> None:
    """After copy, every particle within r_c of a center particle is held locally."""
    everyone = state.center_particles()
    if not everyone:
        return
    positions = np.array([p.x for p in everyone])
    for w, storage in enumerate(state.storages, start=1):
        if not storage.center:
            continue
        local_ids = {p.id for p in storage.local_particles()}
        centers = np.array([p.x for p in storage.center])
        gaps = np.sqrt(((centers[:, None, :] - positions[None, :, :]) ** 2).sum(axis=-1))
        # numpy prefilter with slack, decided with the interpreters' own cutoff test
        candidates = np.nonzero((gaps <= grid.r_c * (1 + 1e-9)).any(axis=0))[0]
        missing = sorted(
            everyone[i].id
            for i in candidates
            if everyone[i].id not in local_ids
            and any(within_cutoff(c.x, everyone[i].x, grid.r_c) for c in storage.center)
        )
        if missing:
            result.fail(f"I={grid.I}, process {w}: partners {missing[:5]} not present")
        result.checked += 1


def _check_border(state: DistributedState, grid: CellGrid, result: LemmaResult) -> None:
    for w, storage in enumerate(state.storages, start=1):
        for l in range(1, grid.n_compartments + 1):
            if neighbor_process(w, l, grid.I) is None and storage.compartment(l):
                result.fail(f"I={grid.I}, process {w}: compartment {l} faces outside but holds particles")
            result.checked += 1


def _check_placement(state: DistributedState, grid: CellGrid, result: LemmaResult) -> None:
    for w, storage in enumerate(state.storages, start=1):
        for p in storage.center:
            owner = cell_of(p.x, grid)
            if owner != w:
                result.fail(f"I={grid.I}: particle {p.id} in process {w}, belongs to {owner}")
            result.checked += 1


def run_runtime_checks(
    grid: CellGrid,
    seed: int,
    report: LemmaReport,
    addressing: Addressing = DEFAULT_ADDRESSING,
    t_max: int = 3,
) -> None:
    """Run the real pipeline on one grid and check each stage's guarantees."""
    instance = lemma_instance(grid, seed, t_max)
    spec = instantiate(instance.method)
    state = distribute_initial(instance, grid)
    log = CommLog()
    while not spec.stop(state.g):
        t = state.g.t
        try:
            state = copy_all(state, grid, log=log, step=t, addressing=addressing)
            _check_ghosts(state, grid, report[GHOST_COMPLETE])
            state = step_all(state, spec, grid)
            state = dist_all(state, grid)
            report[COMPARTMENT_RANGE].checked += len(instance.state)
            _check_border(state, grid, report[BORDER_EMPTY])
            state = collect_all(state, grid, log=log, step=t, addressing=addressing)
            _check_placement(state, grid, report[PLACEMENT])
        except ConstraintViolationError as e:
            report[COMPARTMENT_RANGE].fail(f"I={grid.I}, t={t}: {e}")
            break
        state = state.with_storages(
            ProcessStorage(g=spec.evolve_global(s.g), compartments=s.compartments)
            for s in state.storages
        )

    audit = audit_communications(log.events)
    report[CONFLICT_FREE].checked += audit.events
    for v in audit.violations:
        report[CONFLICT_FREE].fail(
            f"I={grid.I}, t={v.step}, {v.kind} k={v.k}: {v.reason} at {v.target} {v.readers}"
        )


def lemma_suite(
    max_cells: int,
    *,
    dims: Sequence[int] = (1, 2, 3),
    seed: int = 0,
    runtime_cells: int = 27,
    runtime_samples: int = 4,
    addressing: Addressing = DEFAULT_ADDRESSING,
) -> LemmaReport:
    """
    Check every index and runtime guarantee over the grid family bounded by max_cells.

    Index checks cover every shape; runtime checks cover every shape with at
    most `runtime_cells` cells plus `runtime_samples` seeded larger shapes per
    dimension.
    """
    report = LemmaReport(max_cells=max_cells, dims=tuple(dims))
    rng = np.random.default_rng(seed)

    for d in dims:
        shapes = list(grid_shapes(d, max_cells))
        check_round_trip(shapes, report[ROUND_TRIP])
        for I in shapes:
            labels = pattern_labels(I, report[GAMMA_BIJECTIVE])
            check_conflict_free(I, labels, report[CONFLICT_FREE], addressing)
        report.shapes += len(shapes)

        small = [I for I in shapes if cell_count(I) <= runtime_cells]
        large = [I for I in shapes if cell_count(I) > runtime_cells]
        if large and runtime_samples:
            picks = rng.choice(len(large), size=min(runtime_samples, len(large)), replace=False)
            small.extend(large[i] for i in sorted(picks))
        for n, I in enumerate(small):
            run_runtime_checks(lemma_grid(I), seed + n, report, addressing)
        report.runtime_shapes += len(small)
        logging.debug(f"Lemma suite d={d}: {len(shapes)} shapes, {len(small)} run")

    for name in LEMMA_ORDER:
        if not report[name].ok:
            logging.warning(f"Lemma check '{name}' failed {report[name].failure_count} times")
    return report
