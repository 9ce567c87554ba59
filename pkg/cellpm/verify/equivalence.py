"""
Equivalence of sequential and distributed results up to particle ordering.

Particles are paired by id. Created particles carry ids derived from their
parent, step and ordinal, so pairing works across creation and destruction.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from cellpm.cell_grid import CellGrid, DistributedState, grid_for
from cellpm.config import get_tolerances
from cellpm.interpreter import Trajectory, run_traced
from cellpm.model import AlgorithmSpec, GlobalVar, Instance, Particle, State
from cellpm.runtime.executor import ExecMode
from cellpm.runtime.pipeline import DistributedTrajectory, parallel_run_traced


@dataclass(frozen=True)
class ParticleDiff:
    id: int
    field: str
    seq_value: Any
    par_value: Any


@dataclass
class EquivalenceReport:
    """Outcome of comparing a sequential and a distributed final state."""

    match: bool
    T_seq: Optional[int]
    T_par: Optional[int]
    global_match: bool
    particle_diff: List[ParticleDiff] = field(default_factory=list)
    tolerance: float = 0.0
    abs_floor: float = 0.0
    global_diff: List[Tuple[str, Any, Any]] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "match": self.match,
            "T_seq": self.T_seq,
            "T_par": self.T_par,
            "global_match": self.global_match,
            "tolerance": self.tolerance,
            "abs_floor": self.abs_floor,
            "global_diff": [
                {"field": name, "seq": a, "par": b} for name, a, b in self.global_diff
            ],
            "particle_diff": [
                {"id": d.id, "field": d.field, "seq": d.seq_value, "par": d.par_value}
                for d in self.particle_diff
            ],
        }


def values_close(a: Any, b: Any, tolerance: float, abs_floor: float) -> bool:
    """Bit-exact when tolerance is 0, otherwise relative with an absolute floor."""
    if tolerance == 0:
        return type(a) is type(b) and a == b
    if isinstance(a, (int, float)) and isinstance(b, (int, float)):
        if math.isnan(a) or math.isnan(b):
            return False
        return abs(a - b) <= max(tolerance * max(abs(a), abs(b)), abs_floor)
    return a == b


def _as_particles(state: Union[State, DistributedState, Sequence[Particle]]) -> Tuple[Particle, ...]:
    if isinstance(state, State):
        return state.particles
    if isinstance(state, DistributedState):
        return state.center_particles()
    return tuple(state)


def _as_global(state: Union[State, DistributedState]) -> GlobalVar:
    return state.g


def _index_by_id(
    particles: Sequence[Particle], side: str, diffs: List[ParticleDiff]
) -> Dict[int, Particle]:
    by_id: Dict[int, Particle] = {}
    for p in particles:
        if p.id in by_id:
            diffs.append(ParticleDiff(p.id, f"duplicate ({side})", None, None))
        by_id[p.id] = p
    return by_id


def _compare_particle(
    a: Particle, b: Particle, tolerance: float, abs_floor: float
) -> List[ParticleDiff]:
    diffs = []
    if len(a.x) != len(b.x):
        return [ParticleDiff(a.id, "x", a.x, b.x)]
    for l, (ca, cb) in enumerate(zip(a.x, b.x)):
        if not values_close(ca, cb, tolerance, abs_floor):
            diffs.append(ParticleDiff(a.id, f"x[{l}]", ca, cb))
    props_a, props_b = a.props_dict(), b.props_dict()
    for name in sorted(set(props_a) | set(props_b)):
        va, vb = props_a.get(name), props_b.get(name)
        if va is None or vb is None or not values_close(va, vb, tolerance, abs_floor):
            diffs.append(ParticleDiff(a.id, f"props.{name}", va, vb))
    return diffs


def _compare_globals(
    a: GlobalVar, b: GlobalVar, tolerance: float, abs_floor: float
) -> List[Tuple[str, Any, Any]]:
    diffs = []
    if a.t != b.t:
        diffs.append(("t", a.t, b.t))
    if a.t_max != b.t_max:
        diffs.append(("t_max", a.t_max, b.t_max))
    extras_a, extras_b = dict(a.extras), dict(b.extras)
    for name in sorted(set(extras_a) | set(extras_b)):
        va, vb = extras_a.get(name), extras_b.get(name)
        if va is None or vb is None or not values_close(va, vb, tolerance, abs_floor):
            diffs.append((f"extras.{name}", va, vb))
    return diffs


def equivalent_up_to_permutation(
    seq: Union[State, DistributedState],
    dist: Union[State, DistributedState],
    tolerance: float = 0.0,
    *,
    abs_floor: Optional[float] = None,
    T_seq: Optional[int] = None,
    T_par: Optional[int] = None,
) -> EquivalenceReport:
    """
    Compare two final states particle by particle (paired by id) and by g.

    Duplicate or missing ids are reported as differences, never raised.
    """
    if abs_floor is None:
        abs_floor = 0.0 if tolerance == 0 else get_tolerances()[1]

    diffs: List[ParticleDiff] = []
    seq_by_id = _index_by_id(_as_particles(seq), "seq", diffs)
    par_by_id = _index_by_id(_as_particles(dist), "par", diffs)

    for pid in sorted(set(seq_by_id) | set(par_by_id)):
        a, b = seq_by_id.get(pid), par_by_id.get(pid)
        if a is None:
            diffs.append(ParticleDiff(pid, "missing (seq)", None, "present"))
        elif b is None:
            diffs.append(ParticleDiff(pid, "missing (par)", "present", None))
        else:
            diffs.extend(_compare_particle(a, b, tolerance, abs_floor))

    global_diff = _compare_globals(_as_global(seq), _as_global(dist), tolerance, abs_floor)
    global_match = not global_diff
    match = global_match and not diffs and T_seq == T_par
    if not match:
        logging.warning(
            f"States differ: {len(diffs)} particle differences, "
            f"global match={global_match}, T_seq={T_seq}, T_par={T_par}"
        )
    return EquivalenceReport(
        match=match,
        T_seq=T_seq,
        T_par=T_par,
        global_match=global_match,
        particle_diff=diffs,
        tolerance=tolerance,
        abs_floor=abs_floor,
        global_diff=global_diff,
    )


@dataclass(frozen=True)
class EquivalenceRun:
    report: EquivalenceReport
    sequential: Trajectory
    distributed: DistributedTrajectory


def default_tolerance(spec: AlgorithmSpec) -> float:
    return 0.0 if spec.exact else get_tolerances()[0]


def check_equivalence(
    instance: Instance,
    *,
    grid: Optional[CellGrid] = None,
    mode: Union[ExecMode, str] = ExecMode.REFERENCE,
    spec: Optional[AlgorithmSpec] = None,
    tolerance: Optional[float] = None,
    max_iterations: Optional[int] = None,
) -> EquivalenceRun:
    """Run both interpreters on the instance and compare their final states."""
    if spec is None:
        from cellpm.methods import instantiate

        spec = instantiate(instance.method)
    if tolerance is None:
        tolerance = default_tolerance(spec)

    sequential = run_traced(instance, spec=spec, max_iterations=max_iterations)
    distributed = parallel_run_traced(
        instance,
        grid or grid_for(instance),
        mode,
        spec=spec,
        max_iterations=max_iterations,
    )
    report = equivalent_up_to_permutation(
        sequential.final,
        distributed.final,
        tolerance,
        T_seq=sequential.T,
        T_par=distributed.T,
    )
    return EquivalenceRun(report=report, sequential=sequential, distributed=distributed)
