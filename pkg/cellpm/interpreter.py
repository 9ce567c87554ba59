"""
Sequential reference interpreter.

Implements the state transition of a particle method literally: every
particle, in tuple order, folds the interact function over its generated
neighborhood, then every particle is evolved and the results concatenated,
then the global variable advances.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from cellpm.config import get_max_iterations
from cellpm.exceptions import (
    ConstraintViolationError,
    IndexRangeError,
    NonTerminationError,
    UsageError,
)
from cellpm.model import (
    AlgorithmSpec,
    Domain,
    GlobalVar,
    Instance,
    Particle,
    State,
    distance,
    within_cutoff,
)


def neighbors_in(
    g: GlobalVar, particles: Sequence[Particle], j: int, spec: AlgorithmSpec
) -> Tuple[int, ...]:
    """1-based indices k of particles within r_c of particle j that pass Ω."""
    if not 1 <= j <= len(particles):
        raise IndexRangeError(f"Particle index {j} outside [1, {len(particles)}]")
    p_j = particles[j - 1]
    return tuple(
        k
        for k, p_k in enumerate(particles, start=1)
        if within_cutoff(p_k.x, p_j.x, spec.r_c) and spec.omega(g, p_k, p_j)
    )


def neighborhood(state: State, j: int, spec: AlgorithmSpec) -> Tuple[int, ...]:
    return neighbors_in(state.g, state.particles, j, spec)


def interact_particle(
    g: GlobalVar,
    particles: Sequence[Particle],
    j: int,
    neighbors: Sequence[int],
    spec: AlgorithmSpec,
) -> Particle:
    """Fold the interact function of particle j over the given neighbor indices."""
    p_j = particles[j - 1]
    for k in neighbors:
        p_j = spec.interact(g, p_j, particles[k - 1])
    return p_j


def interact_range(
    g: GlobalVar, particles: Sequence[Particle], indices: Sequence[int], spec: AlgorithmSpec
) -> Tuple[Particle, ...]:
    """
    Interact the particles at `indices`, in order, with all their neighbors.

    The tuple is updated in place as the fold goes; partners later in the order
    see already-updated particles, exactly as in the sequential definition.
    """
    current: List[Particle] = list(particles)
    for j in indices:
        neighbors = neighbors_in(g, current, j, spec)
        current[j - 1] = interact_particle(g, current, j, neighbors, spec)
    return tuple(current)


def interact_all(state: State, spec: AlgorithmSpec) -> Tuple[Particle, ...]:
    return interact_range(
        state.g, state.particles, range(1, len(state.particles) + 1), spec
    )


def evolve_particle(
    g: GlobalVar,
    p: Particle,
    spec: AlgorithmSpec,
    domain: Optional[Domain] = None,
) -> Tuple[Particle, ...]:
    """Evolve one particle and check the motion constraints on everything it returns."""
    evolved = tuple(spec.evolve(g, p))
    for child in evolved:
        if len(child.x) != len(p.x):
            raise ConstraintViolationError(
                f"Particle {child.id} changed dimension during evolve",
                constraint="dimension",
                particle_id=child.id,
                step=g.t,
            )
        if not within_cutoff(child.x, p.x, spec.r_c):
            raise ConstraintViolationError(
                f"Particle {child.id} moved {distance(child.x, p.x)} > r_c={spec.r_c} "
                f"from particle {p.id} at step {g.t} (movement bound)",
                constraint="movement bound",
                particle_id=child.id,
                step=g.t,
            )
        if domain is not None:
            domain.require(child, step=g.t)
    return evolved


def evolve_all(
    state: State, spec: AlgorithmSpec, domain: Optional[Domain] = None
) -> State:
    particles = tuple(
        child
        for p in state.particles
        for child in evolve_particle(state.g, p, spec, domain)
    )
    return State(g=state.g, particles=particles)


def step(state: State, spec: AlgorithmSpec, domain: Optional[Domain] = None) -> State:
    """One state transition [g, p] -> [ė(g), ε(ι(p))]."""
    if spec.stop(state.g):
        raise UsageError(
            f"step called at t={state.g.t} although the stop condition already holds"
        )
    interacted = State(g=state.g, particles=interact_all(state, spec))
    evolved = evolve_all(interacted, spec, domain)
    logging.debug(
        f"Sequential step t={state.g.t}: {len(state)} -> {len(evolved)} particles"
    )
    return State(g=spec.evolve_global(state.g), particles=evolved.particles)


@dataclass(frozen=True)
class Trajectory:
    """Every state visited by a run, plus wall-clock seconds per transition."""

    states: Tuple[State, ...]
    timings: Tuple[float, ...] = field(default=())

    @property
    def final(self) -> State:
        return self.states[-1]

    @property
    def T(self) -> int:
        """Number of states visited, including the initial one."""
        return len(self.states)


def _resolve_spec(instance: Instance, spec: Optional[AlgorithmSpec]) -> AlgorithmSpec:
    if spec is not None:
        return spec
    from cellpm.methods import instantiate

    return instantiate(instance.method)


def run_traced(
    instance: Instance,
    *,
    spec: Optional[AlgorithmSpec] = None,
    max_iterations: Optional[int] = None,
) -> Trajectory:
    """Run to the final state and keep every intermediate state."""
    spec = _resolve_spec(instance, spec)
    limit = max_iterations if max_iterations is not None else get_max_iterations()

    states = [instance.state]
    timings = []
    state = instance.state
    while not spec.stop(state.g):
        if len(timings) >= limit:
            raise NonTerminationError(
                f"Stop condition still false after {limit} transitions (t={state.g.t})",
                iterations=limit,
            )
        started = time.perf_counter()
        state = step(state, spec, instance.domain)
        timings.append(time.perf_counter() - started)
        states.append(state)

    logging.info(
        f"Sequential run of {spec.name} finished: T={len(states)}, "
        f"{len(state)} particles"
    )
    return Trajectory(states=tuple(states), timings=tuple(timings))


def run(
    instance: Instance,
    *,
    spec: Optional[AlgorithmSpec] = None,
    max_iterations: Optional[int] = None,
) -> State:
    """Advance the instance to its final state."""
    return run_traced(instance, spec=spec, max_iterations=max_iterations).final
