"""
The distributed-memory interpreter.

One state transition is copy_all -> step_all -> dist_all -> collect_all on
the particle storages plus ė on every process's copy of g. Copy and collect
run as 3^d checkerboard phases; in phase k only the processes gamma(k, .)
read, and every read is a pull of immutable particles logged as a
CommEvent. No process ever writes another process's storage.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from cellpm.cell_grid import (
    CellGrid,
    DistributedState,
    ProcessStorage,
    distribute_initial,
    grid_for,
)
from cellpm.config import get_max_iterations
from cellpm.exceptions import (
    ConstraintViolationError,
    NonTerminationError,
    UsageError,
)
from cellpm.index_space import (
    DEFAULT_ADDRESSING,
    Addressing,
    active_processes,
    compartment_of,
    mirror_compartment,
)
from cellpm.interpreter import evolve_particle, interact_range
from cellpm.model import AlgorithmSpec, Domain, Instance
from cellpm.runtime.comm import CommEvent, CommLog, MessageBatch
from cellpm.runtime.executor import ExecMode, PhaseExecutor, make_executor

STAGES = ("copy", "step", "dist", "collect")


def _target(addressing: Addressing, w: int, l: int, grid: CellGrid) -> Optional[int]:
    target = addressing.beta(w, l, grid.I)
    if target is None or not 1 <= target <= grid.n_cell:
        return None
    return target


def _run_phases(
    state: DistributedState,
    grid: CellGrid,
    pull,
    executor: PhaseExecutor,
    log: Optional[CommLog],
    kind: str,
) -> DistributedState:
    """Run the 3^d checkerboard phases of one copy or collect stage."""
    storages = list(state.storages)
    for k in range(1, grid.n_compartments + 1):
        readers = active_processes(k, grid.I)
        if not readers:
            continue
        snapshot = tuple(storages)
        results = executor.map_phase(lambda w: pull(w, k, snapshot), readers)
        events = 0
        for w, storage, batches in results:
            storages[w - 1] = storage
            if log is not None:
                log.extend(b.event for b in batches)
            events += len(batches)
        logging.debug(f"{kind} phase k={k}: {len(readers)} readers, {events} pulls")
    return state.with_storages(storages)


def copy_all(
    state: DistributedState,
    grid: CellGrid,
    *,
    executor: Optional[PhaseExecutor] = None,
    log: Optional[CommLog] = None,
    step: int = 0,
    addressing: Addressing = DEFAULT_ADDRESSING,
) -> DistributedState:
    """Fill every compartment l of every process with the center of its l-th neighbor."""
    executor = executor or PhaseExecutor()
    center = grid.center

    def pull(w: int, k: int, snapshot: Tuple[ProcessStorage, ...]):
        batches: List[MessageBatch] = []
        own = snapshot[w - 1]
        compartments = list(own.compartments)
        for l in range(1, grid.n_compartments + 1):
            if l == center:
                continue
            target = _target(addressing, w, l, grid)
            if target is None:
                compartments[l - 1] = ()
                continue
            particles = snapshot[target - 1].center
            event = CommEvent(step, k, w, target, "copy", len(particles))
            batches.append(MessageBatch(event, l, particles))
        for batch in batches:
            compartments[batch.compartment - 1] = batch.particles
        return w, ProcessStorage(g=own.g, compartments=tuple(compartments)), batches

    return _run_phases(state, grid, pull, executor, log, "copy")


def local_interaction(
    storage: ProcessStorage, spec: AlgorithmSpec, grid: CellGrid
) -> ProcessStorage:
    """Interact the center particles with everything the process holds locally."""
    local = storage.local_particles()
    z = sum(len(c) for c in storage.compartments[: storage.center_index - 1])
    count = len(storage.center)
    if count == 0:
        return storage
    interacted = interact_range(storage.g, local, range(z + 1, z + count + 1), spec)
    return storage.with_center(interacted[z : z + count])


def _step_process(
    storage: ProcessStorage, spec: AlgorithmSpec, grid: CellGrid, domain: Optional[Domain]
) -> ProcessStorage:
    interacted = local_interaction(storage, spec, grid)
    evolved = tuple(
        child
        for p in interacted.center
        for child in evolve_particle(storage.g, p, spec, domain)
    )
    result = interacted.with_center(evolved)
    for l, (before, after) in enumerate(
        zip(storage.compartments, result.compartments), start=1
    ):
        if l != storage.center_index and before != after:
            raise ConstraintViolationError(
                f"Ghost compartment {l} changed during the step (ghost write)",
                constraint="ghost write",
                step=storage.g.t,
            )
    return result


def step_all(
    state: DistributedState,
    spec: AlgorithmSpec,
    grid: CellGrid,
    *,
    executor: Optional[PhaseExecutor] = None,
    domain: Optional[Domain] = None,
) -> DistributedState:
    """Every process interacts and evolves its own center particles; ghosts stay as they are."""
    executor = executor or PhaseExecutor()
    domain = domain if domain is not None else grid.domain
    storages = executor.map_phase(
        lambda s: _step_process(s, spec, grid, domain), state.storages
    )
    return state.with_storages(storages)


def _dist_process(w: int, storage: ProcessStorage, grid: CellGrid) -> ProcessStorage:
    compartments: List[list] = [[] for _ in range(grid.n_compartments)]
    for p in storage.center:
        try:
            alpha = compartment_of(p.x, w, grid)
        except ConstraintViolationError as e:
            raise ConstraintViolationError(
                f"Particle {p.id}: {e}",
                constraint=e.constraint,
                particle_id=p.id,
                step=storage.g.t,
            ) from e
        compartments[alpha - 1].append(p)
    return ProcessStorage(g=storage.g, compartments=tuple(tuple(c) for c in compartments))


def dist_all(
    state: DistributedState,
    grid: CellGrid,
    *,
    executor: Optional[PhaseExecutor] = None,
) -> DistributedState:
    """Sort each process's center particles into compartments by the cell they now lie in."""
    executor = executor or PhaseExecutor()
    storages = executor.map_phase(
        lambda item: _dist_process(item[0], item[1], grid),
        list(enumerate(state.storages, start=1)),
    )
    return state.with_storages(storages)


def collect_all(
    state: DistributedState,
    grid: CellGrid,
    *,
    executor: Optional[PhaseExecutor] = None,
    log: Optional[CommLog] = None,
    step: int = 0,
    addressing: Addressing = DEFAULT_ADDRESSING,
) -> DistributedState:
    """
    Gather particles that moved into each process's cell.

    Process w appends, for every neighbor l, the compartment of neighbor l
    that faces back toward w. Those outgoing compartments are left in place;
    the next copy_all overwrites them.
    """
    executor = executor or PhaseExecutor()
    center = grid.center
    d = grid.d

    def pull(w: int, k: int, snapshot: Tuple[ProcessStorage, ...]):
        own = snapshot[w - 1]
        gathered = list(own.center)
        batches: List[MessageBatch] = []
        for l in range(1, grid.n_compartments + 1):
            if l == center:
                continue
            target = _target(addressing, w, l, grid)
            if target is None:
                continue
            mirror = mirror_compartment(l, d)
            particles = snapshot[target - 1].compartment(mirror)
            event = CommEvent(step, k, w, target, "collect", len(particles))
            batches.append(MessageBatch(event, mirror, particles))
        for batch in batches:
            gathered.extend(batch.particles)
        return w, own.with_center(gathered), batches

    return _run_phases(state, grid, pull, executor, log, "collect")


def _check_uniform_globals(state: DistributedState) -> None:
    first = state.g
    for w, g in enumerate(state.globals, start=1):
        if g != first:
            raise ConstraintViolationError(
                f"Global variable of process {w} diverged from process 1 (global uniformity)",
                constraint="global uniformity",
                step=first.t,
            )


def parallel_step(
    state: DistributedState,
    spec: AlgorithmSpec,
    grid: CellGrid,
    *,
    executor: Optional[PhaseExecutor] = None,
    log: Optional[CommLog] = None,
    timings: Optional[Dict[str, float]] = None,
    addressing: Addressing = DEFAULT_ADDRESSING,
) -> DistributedState:
    """One distributed state transition."""
    if spec.stop(state.g):
        raise UsageError(
            f"parallel_step called at t={state.g.t} although the stop condition already holds"
        )
    executor = executor or PhaseExecutor()
    t = state.g.t
    stages = {
        "copy": lambda s: copy_all(
            s, grid, executor=executor, log=log, step=t, addressing=addressing
        ),
        "step": lambda s: step_all(s, spec, grid, executor=executor),
        "dist": lambda s: dist_all(s, grid, executor=executor),
        "collect": lambda s: collect_all(
            s, grid, executor=executor, log=log, step=t, addressing=addressing
        ),
    }
    for name in STAGES:
        started = time.perf_counter()
        state = stages[name](state)
        if timings is not None:
            timings[name] = timings.get(name, 0.0) + time.perf_counter() - started

    state = state.with_storages(
        ProcessStorage(g=spec.evolve_global(s.g), compartments=s.compartments)
        for s in state.storages
    )
    _check_uniform_globals(state)
    logging.debug(
        f"Distributed step t={t}: {len(state.center_particles())} particles on "
        f"{state.n_cell} processes"
    )
    return state


@dataclass(frozen=True)
class DistributedTrajectory:
    """Outcome of a distributed run with its communication log and stage timings."""

    final: DistributedState
    T: int
    comm_log: CommLog
    timings: Tuple[Dict[str, float], ...] = ()
    states: Tuple[DistributedState, ...] = field(default=())


def _resolve_spec(instance: Instance, spec: Optional[AlgorithmSpec]) -> AlgorithmSpec:
    if spec is not None:
        return spec
    from cellpm.methods import instantiate

    return instantiate(instance.method)


def parallel_run_traced(
    instance: Instance,
    grid: Optional[CellGrid] = None,
    mode: ExecMode | str = ExecMode.REFERENCE,
    *,
    spec: Optional[AlgorithmSpec] = None,
    max_iterations: Optional[int] = None,
    keep_states: bool = False,
    max_workers: Optional[int] = None,
    addressing: Addressing = DEFAULT_ADDRESSING,
) -> DistributedTrajectory:
    """Distribute the instance and iterate parallel_step until the stop condition holds."""
    spec = _resolve_spec(instance, spec)
    grid = grid or grid_for(instance)
    limit = max_iterations if max_iterations is not None else get_max_iterations()

    state = distribute_initial(instance, grid)
    log = CommLog()
    timings: List[Dict[str, float]] = []
    states = [state] if keep_states else []
    T = 1
    with make_executor(mode, max_workers) as executor:
        while not spec.stop(state.g):
            if T - 1 >= limit:
                raise NonTerminationError(
                    f"Stop condition still false after {limit} transitions (t={state.g.t})",
                    iterations=limit,
                )
            step_timings: Dict[str, float] = {}
            state = parallel_step(
                state,
                spec,
                grid,
                executor=executor,
                log=log,
                timings=step_timings,
                addressing=addressing,
            )
            timings.append(step_timings)
            if keep_states:
                states.append(state)
            T += 1

    logging.info(
        f"Distributed run of {spec.name} ({ExecMode(mode).value}) finished: T={T}, "
        f"{len(state.center_particles())} particles, {len(log)} pulls"
    )
    return DistributedTrajectory(
        final=state, T=T, comm_log=log, timings=tuple(timings), states=tuple(states)
    )


def parallel_run(
    instance: Instance,
    grid: Optional[CellGrid] = None,
    mode: ExecMode | str = ExecMode.REFERENCE,
    *,
    spec: Optional[AlgorithmSpec] = None,
    max_iterations: Optional[int] = None,
) -> DistributedState:
    return parallel_run_traced(
        instance, grid, mode, spec=spec, max_iterations=max_iterations
    ).final
