"""
Randomized checks of the constraints the distributed scheme relies on.

Interaction laws are checked on random particle triples; motion constraints
are checked on a recorded trajectory.
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np

from cellpm.config import get_tolerances
from cellpm.model import (
    AlgorithmSpec,
    Domain,
    GlobalVar,
    Particle,
    State,
    distance,
    within_cutoff,
)
from cellpm.verify.equivalence import values_close

ParticleSampler = Callable[[np.random.Generator, int], Particle]

PARTNER_INDEPENDENCE = "partner independence"
ORDER_INDEPENDENCE = "order independence"
NEIGHBORHOOD_INDEPENDENCE = "neighborhood independence"
PULL_FORM = "pull form"


@dataclass(frozen=True)
class Counterexample:
    trial: int
    law: str
    detail: str

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class LawReport:
    method: str
    trials: int
    counterexamples: List[Counterexample] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def to_dict(self) -> Dict[str, Any]:
        return {
            "method": self.method,
            "trials": self.trials,
            "ok": self.ok,
            "counterexamples": [c.to_dict() for c in self.counterexamples],
        }


def _randomized_props(rng: np.random.Generator, props: Dict[str, Any]) -> Dict[str, Any]:
    randomized = {}
    for name, value in props.items():
        if isinstance(value, bool):
            randomized[name] = value
        elif isinstance(value, int):
            randomized[name] = int(rng.integers(-1000, 1001))
        elif isinstance(value, float):
            randomized[name] = float(rng.uniform(-10.0, 10.0))
        else:
            randomized[name] = value
    return randomized


def builtin_sampler(spec: AlgorithmSpec, d: int) -> ParticleSampler:
    """Random particles carrying the property layout of a registered method."""
    from cellpm.methods import MethodParams, get_method

    method_def = get_method(spec.name)
    params = MethodParams(
        name=spec.name,
        cutoff=spec.r_c,
        domain_min=(0.0,) * d,
        domain_max=(spec.r_c,) * d,
    )

    def sample(rng: np.random.Generator, pid: int) -> Particle:
        props = method_def.initial_props(rng, params) if method_def.initial_props else {}
        x = tuple(float(c) for c in rng.uniform(0.0, spec.r_c, size=d))
        return Particle(id=pid, x=x, props=_randomized_props(rng, props))

    return sample


def _same(a: Particle, b: Particle, exact: bool, rel: float, floor: float) -> bool:
    if a.id != b.id or len(a.x) != len(b.x):
        return False
    tol = 0.0 if exact else rel
    if not all(values_close(ca, cb, tol, floor) for ca, cb in zip(a.x, b.x)):
        return False
    pa, pb = a.props_dict(), b.props_dict()
    return set(pa) == set(pb) and all(
        values_close(pa[n], pb[n], tol, floor) for n in pa
    )


def check_interaction_laws(
    spec: AlgorithmSpec,
    seed: int,
    trials: int,
    *,
    sampler: Optional[ParticleSampler] = None,
    d: int = 2,
    max_counterexamples: int = 20,
) -> LawReport:
    """
    Check the interaction laws on `trials` random triples (p_j, p_k, p_k').

    - partner independence: i(p_j, i(p_k, p_k')) == i(p_j, p_k)
    - order independence: i(i(p_j, p_k), p_k') == i(i(p_j, p_k'), p_k)
    - neighborhood independence: interact keeps the position, and Ω gives the
      same answer before and after the partner interacted
    - pull form: interact returns the querying particle (same id)
    """
    report = LawReport(method=spec.name, trials=max(trials, 0))
    if trials <= 0:
        return report

    rng = np.random.default_rng(seed)
    sample = sampler or builtin_sampler(spec, d)
    rel, floor = get_tolerances()

    def fail(trial: int, law: str, detail: str) -> None:
        if len(report.counterexamples) < max_counterexamples:
            report.counterexamples.append(Counterexample(trial, law, detail))

    for trial in range(trials):
        g = GlobalVar(t=int(rng.integers(1, 100)), t_max=100)
        p_j, p_k, p_k2 = sample(rng, 0), sample(rng, 1), sample(rng, 2)
        i = spec.interact

        direct = i(g, p_j, p_k)
        if direct.id != p_j.id:
            fail(trial, PULL_FORM, f"interact returned id {direct.id} for p_j={p_j.id}")
            continue

        p_k_after = i(g, p_k, p_k2)
        via_partner = i(g, p_j, p_k_after)
        if not _same(via_partner, direct, spec.exact, rel, floor):
            fail(
                trial,
                PARTNER_INDEPENDENCE,
                f"i(p_j, i(p_k, p_k')) = {via_partner.props} != i(p_j, p_k) = {direct.props}",
            )

        forward = i(g, direct, p_k2)
        backward = i(g, i(g, p_j, p_k2), p_k)
        if not _same(forward, backward, spec.exact, rel, floor):
            fail(
                trial,
                ORDER_INDEPENDENCE,
                f"order k,k' gives {forward.props}, order k',k gives {backward.props}",
            )

        if direct.x != p_j.x or p_k_after.x != p_k.x:
            fail(trial, NEIGHBORHOOD_INDEPENDENCE, "interact changed a position")
        elif spec.omega(g, p_k_after, p_j) != spec.omega(g, p_k, p_j):
            fail(trial, NEIGHBORHOOD_INDEPENDENCE, "Ω changed after the partner interacted")

    if not report.ok:
        logging.warning(
            f"{spec.name}: {len(report.counterexamples)} interaction-law counterexamples"
        )
    return report


@dataclass(frozen=True)
class MotionViolation:
    step: int
    particle_id: int
    constraint: str
    detail: str

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class MotionReport:
    states: int
    violations: List[MotionViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "states": self.states,
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
        }


def check_motion_constraints(
    trace: Sequence[State], *, r_c: float, domain: Domain
) -> MotionReport:
    """Flag out-of-domain positions and per-step displacements above r_c (matched by id)."""
    report = MotionReport(states=len(trace))
    previous: Optional[Dict[int, Particle]] = None
    for state in trace:
        for p in state.particles:
            if not domain.contains(p.x):
                report.violations.append(
                    MotionViolation(
                        state.g.t, p.id, "domain containment", f"x={p.x} outside domain"
                    )
                )
            if previous is not None and p.id in previous:
                moved = distance(p.x, previous[p.id].x)
                if not within_cutoff(p.x, previous[p.id].x, r_c):
                    report.violations.append(
                        MotionViolation(
                            state.g.t,
                            p.id,
                            "movement bound",
                            f"moved {moved} > r_c={r_c}",
                        )
                    )
        previous = state.by_id()

    if not report.ok:
        logging.warning(f"Motion check found {len(report.violations)} violations")
    return report
