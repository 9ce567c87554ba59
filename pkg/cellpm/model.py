"""
Core value types of a particle method.

A particle method algorithm is the 7-tuple (P, G, u, f, i, e, ė). Here P is
`Particle`, G is `GlobalVar`, u is generated from (r_c, Ω) and the five
functions live on `AlgorithmSpec`. Every type is an immutable value, so
states can be handed between threads without copying.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import TYPE_CHECKING, Callable, Dict, Iterable, Optional, Tuple, Union

from cellpm.exceptions import ConstraintViolationError, DomainViolationError

if TYPE_CHECKING:  # pragma: no cover
    from cellpm.methods.params import MethodParams

Scalar = Union[int, float]
Props = Tuple[Tuple[str, Scalar], ...]
Position = Tuple[float, ...]


def freeze_props(values: Union[Props, Dict[str, Scalar], None]) -> Props:
    """Turn a mapping or pair sequence into the ordered, hashable props form."""
    if values is None:
        return ()
    items = values.items() if isinstance(values, dict) else values
    return tuple((str(name), value) for name, value in items)


@dataclass(frozen=True, slots=True)
class Particle:
    """One particle: a stable id, a position and an ordered bag of properties."""

    id: int
    x: Position
    props: Props = ()

    def __post_init__(self):
        if self.id < 0:
            raise ValueError(f"Particle id must be non-negative, got {self.id}")
        object.__setattr__(self, "x", tuple(float(c) for c in self.x))
        object.__setattr__(self, "props", freeze_props(self.props))

    @property
    def d(self) -> int:
        return len(self.x)

    def prop(self, name: str) -> Scalar:
        for key, value in self.props:
            if key == name:
                return value
        raise KeyError(f"Particle {self.id} has no property '{name}'")

    def props_dict(self) -> Dict[str, Scalar]:
        return dict(self.props)

    def with_props(self, **updates: Scalar) -> "Particle":
        """Return a copy with some properties replaced; new names are appended."""
        merged = [
            (key, updates.pop(key)) if key in updates else (key, value)
            for key, value in self.props
        ]
        merged.extend(updates.items())
        return replace(self, props=tuple(merged))

    def moved_to(self, x: Iterable[float]) -> "Particle":
        return replace(self, x=tuple(x))


def distance(a: Position, b: Position) -> float:
    """Euclidean distance |a - b|."""
    return math.dist(a, b)


# Float distances this close to r_c are decided in exact rational arithmetic
_CUTOFF_MARGIN = 1e-12


def within_cutoff(a: Position, b: Position, r_c: float) -> bool:
    """
    |a - b| <= r_c, decided on the exact values of the coordinates.

    Rounding in the float distance must never pair particles two cells apart,
    so near-ties fall back to Fraction arithmetic on the squared distance.
    """
    gap = math.dist(a, b)
    if gap < r_c * (1 - _CUTOFF_MARGIN):
        return True
    if gap > r_c * (1 + _CUTOFF_MARGIN):
        return False
    squared = sum((Fraction(x) - Fraction(y)) ** 2 for x, y in zip(a, b))
    return squared <= Fraction(r_c) ** 2


@dataclass(frozen=True, slots=True)
class Domain:
    """Half-open computational domain [D_min, D_max)."""

    d_min: Position
    d_max: Position

    def __post_init__(self):
        object.__setattr__(self, "d_min", tuple(float(c) for c in self.d_min))
        object.__setattr__(self, "d_max", tuple(float(c) for c in self.d_max))
        if len(self.d_min) != len(self.d_max) or not self.d_min:
            raise ValueError("Domain bounds must be non-empty vectors of equal length")
        if any(lo >= hi for lo, hi in zip(self.d_min, self.d_max)):
            raise ValueError(
                f"Domain bounds must satisfy D_min < D_max, got {self.d_min} / {self.d_max}"
            )

    @property
    def d(self) -> int:
        return len(self.d_min)

    def contains(self, x: Position) -> bool:
        return len(x) == self.d and all(
            lo <= c < hi for c, lo, hi in zip(x, self.d_min, self.d_max)
        )

    def require(self, particle: Particle, step: Optional[int] = None) -> None:
        """Raise DomainViolationError unless the particle lies inside the domain."""
        if not self.contains(particle.x):
            raise DomainViolationError(
                f"Particle {particle.id} at {particle.x} left the domain "
                f"[{self.d_min}, {self.d_max}) (domain containment)",
                particle_id=particle.id,
                step=step,
            )

    def clamp(self, x: Iterable[float]) -> Position:
        """Clamp a position into the domain; the upper bound is the last float below D_max."""
        return tuple(
            min(max(c, lo), math.nextafter(hi, -math.inf))
            for c, lo, hi in zip(x, self.d_min, self.d_max)
        )

    def reflect(self, x: Iterable[float]) -> Position:
        """Mirror a position at the domain walls, then clamp what is still outside."""
        reflected = []
        for c, lo, hi in zip(x, self.d_min, self.d_max):
            if c < lo:
                c = lo + (lo - c)
            elif c >= hi:
                c = hi - (c - hi)
            reflected.append(c)
        return self.clamp(reflected)


@dataclass(frozen=True, slots=True)
class GlobalVar:
    """The global variable g: step counter, stop bound and method-specific scalars."""

    t: int = 1
    t_max: int = 1
    extras: Props = ()

    def __post_init__(self):
        if self.t < 1:
            raise ValueError(f"Global step counter must be >= 1, got {self.t}")
        object.__setattr__(self, "extras", freeze_props(self.extras))

    def extra(self, name: str) -> Scalar:
        for key, value in self.extras:
            if key == name:
                return value
        raise KeyError(f"Global variable has no extra '{name}'")

    def advanced(self) -> "GlobalVar":
        return replace(self, t=self.t + 1)


OmegaFn = Callable[[GlobalVar, Particle, Particle], bool]
StopFn = Callable[[GlobalVar], bool]
InteractFn = Callable[[GlobalVar, Particle, Particle], Particle]
EvolveFn = Callable[[GlobalVar, Particle], Tuple[Particle, ...]]
EvolveGlobalFn = Callable[[GlobalVar], GlobalVar]


def distinct_ids(g: GlobalVar, p_k: Particle, p_j: Particle) -> bool:
    """Ω excluding self-interaction: partner and querying particle differ."""
    return p_k.id != p_j.id


def always(g: GlobalVar, p_k: Particle, p_j: Particle) -> bool:
    return True


def stop_at_t_max(g: GlobalVar) -> bool:
    return g.t >= g.t_max


def advance_step(g: GlobalVar) -> GlobalVar:
    return g.advanced()


@dataclass(frozen=True)
class AlgorithmSpec:
    """
    A particle method algorithm in pull form.

    u is not a free function: it is generated from `r_c` and `omega`. The
    interact function returns the updated querying particle only and evolve
    returns no global variable, so the pull and g-preservation constraints
    hold structurally.
    """

    name: str
    r_c: float
    interact: InteractFn
    evolve: EvolveFn
    omega: OmegaFn = distinct_ids
    stop: StopFn = stop_at_t_max
    evolve_global: EvolveGlobalFn = advance_step
    exact: bool = True
    description: str = ""

    def __post_init__(self):
        if not self.r_c > 0:
            raise ValueError(f"Cutoff radius must be positive, got {self.r_c}")


def _unique_ids(particles: Tuple[Particle, ...]) -> None:
    seen = set()
    for p in particles:
        if p.id in seen:
            raise ConstraintViolationError(
                f"Duplicate particle id {p.id} in state (unique ids)",
                constraint="unique ids",
                particle_id=p.id,
            )
        seen.add(p.id)


@dataclass(frozen=True, slots=True)
class State:
    """A sequential state [g, p]."""

    g: GlobalVar
    particles: Tuple[Particle, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "particles", tuple(self.particles))
        _unique_ids(self.particles)

    def __len__(self) -> int:
        return len(self.particles)

    def by_id(self) -> Dict[int, Particle]:
        return {p.id: p for p in self.particles}


@dataclass(frozen=True)
class Instance:
    """
    A particle method instance: the initial state plus what is needed to
    rebuild the algorithm (method name and parameters, which include the
    cutoff radius and the domain).
    """

    state: State
    method: "MethodParams"
    domain: Domain = field(init=False)

    def __post_init__(self):
        object.__setattr__(
            self, "domain", Domain(self.method.domain_min, self.method.domain_max)
        )
        for p in self.state.particles:
            if p.d != self.domain.d:
                raise DomainViolationError(
                    f"Particle {p.id} has {p.d} coordinates, domain is {self.domain.d}-dimensional",
                    particle_id=p.id,
                )
            self.domain.require(p, step=self.state.g.t)

    @property
    def d(self) -> int:
        return self.domain.d

    @property
    def r_c(self) -> float:
        return self.method.cutoff


def spawn_id(parent_id: int, t: int, ordinal: int) -> int:
    """
    Deterministic id for the ordinal-th particle created by `parent_id` at step t.

    Both interpreters call evolve with the same (parent, g) pair, so created
    particles get identical ids regardless of which process evolves them.
    """
    digest = hashlib.blake2b(
        f"{parent_id}:{t}:{ordinal}".encode(), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big") >> 2
