"""
Index translations for the cell grid and the checkerboard schedule.

All indices are 1-based, as in the particle method formalism:

- ``to_vec`` / ``to_scalar`` translate between a scalar index in
  [1, prod(I)] and a vectorial index in [1, I].
- ``checkerboard_dims`` gives the active-cell counts of pattern k.
- ``active_process`` (gamma) addresses the j-th active process of pattern k.
- ``neighbor_process`` (beta) addresses the l-th neighbor cell of process t,
  or ``None`` when that cell would lie outside the grid.
- ``compartment_of`` (alpha) maps a position to one of the 3^d storage
  compartments of a process.

Each scalar function has a numpy counterpart working on whole index arrays,
used by the exhaustive lemma checks. Index arithmetic is checked against the
signed 64-bit range, since the array forms use int64.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Protocol, Sequence, Tuple

import numpy as np

from cellpm.exceptions import (
    ConstraintViolationError,
    IndexOverflowError,
    IndexRangeError,
)

GridDims = Tuple[int, ...]
IndexVec = Tuple[int, ...]

INT64_MAX = 2**63 - 1


class GridLike(Protocol):
    d_min: Tuple[float, ...]
    r_c: float
    I: GridDims


def _checked(value: int) -> int:
    if value > INT64_MAX or value < -INT64_MAX - 1:
        raise IndexOverflowError(f"Index value {value} exceeds the signed 64-bit range")
    return value


def grid_dims(I: Sequence[int]) -> GridDims:
    """Validate a cell-count vector and return it as a tuple."""
    dims = tuple(int(i) for i in I)
    if not dims:
        raise IndexRangeError("Grid dimensions must have at least one entry")
    if any(i < 1 for i in dims):
        raise IndexRangeError(f"Grid dimensions must be positive, got {dims}")
    cell_count(dims)
    return dims


def cell_count(I: Sequence[int]) -> int:
    """prod(I), checked against 64-bit overflow."""
    return _checked(math.prod(I))


def pattern_dims(d: int) -> GridDims:
    """The 3 x ... x 3 index space of checkerboard patterns and compartments."""
    return (3,) * d


def pattern_count(d: int) -> int:
    return _checked(3**d)


def center_compartment(d: int) -> int:
    """Compartment (3^d + 1) / 2, the process's own cell."""
    return (pattern_count(d) + 1) // 2


def _strides(I: Sequence[int]) -> Tuple[int, ...]:
    strides = []
    acc = 1
    for i in I:
        strides.append(acc)
        acc = _checked(acc * i)
    return tuple(strides)


def to_vec(j: int, I: Sequence[int]) -> IndexVec:
    """Translate a scalar index into a vectorial index over I."""
    total = cell_count(I)
    if not 1 <= j <= total:
        raise IndexRangeError(f"Scalar index {j} outside [1, {total}] for I={tuple(I)}")
    return tuple(
        (j - 1) // stride % i + 1 for stride, i in zip(_strides(I), I)
    )


def to_scalar(v: Sequence[int], I: Sequence[int]) -> int:
    """Translate a vectorial index into a scalar index over I."""
    if len(v) != len(I):
        raise IndexRangeError(f"Index vector {tuple(v)} does not match I={tuple(I)}")
    if any(not 1 <= c <= i for c, i in zip(v, I)):
        raise IndexRangeError(f"Index vector {tuple(v)} outside [1, {tuple(I)}]")
    return _checked(1 + sum((c - 1) * s for c, s in zip(v, _strides(I))))


def checkerboard_dims(k: int, I: Sequence[int]) -> Tuple[GridDims, int]:
    """Active cells per dimension of pattern k, and their product."""
    d = len(I)
    pattern = to_vec(k, pattern_dims(d))
    active = tuple((i - p + 3) // 3 for i, p in zip(I, pattern))
    return active, cell_count(active)


def active_process(k: int, j: int, I: Sequence[int]) -> int:
    """gamma(k, j): the j-th active process of checkerboard pattern k."""
    active, count = checkerboard_dims(k, I)
    if not 1 <= j <= count:
        raise IndexRangeError(f"Active index {j} outside [1, {count}] for pattern {k}")
    pattern = to_vec(k, pattern_dims(len(I)))
    return to_scalar(
        tuple(a * 3 + p - 3 for a, p in zip(to_vec(j, active), pattern)), I
    )


def active_processes(k: int, I: Sequence[int]) -> Tuple[int, ...]:
    """All processes of pattern k in ascending j."""
    _, count = checkerboard_dims(k, I)
    return tuple(active_process(k, j, I) for j in range(1, count + 1))


def neighbor_process(t: int, l: int, I: Sequence[int]) -> Optional[int]:
    """beta(t, l): the l-th neighbor cell of process t, or None off the grid."""
    d = len(I)
    offset = to_vec(l, pattern_dims(d))
    target = tuple(c + o - 2 for c, o in zip(to_vec(t, I), offset))
    if any(not 1 <= c <= i for c, i in zip(target, I)):
        return None
    return to_scalar(target, I)


def mirror_compartment(l: int, d: int) -> int:
    """The compartment facing back: the l-th neighbor sees us through this one."""
    return to_scalar(tuple(4 - c for c in to_vec(l, pattern_dims(d))), pattern_dims(d))


def cell_floor(c: float, lo: float, r_c: float) -> int:
    """floor((c - lo) / r_c) on the exact values; float only away from cell boundaries."""
    q = (c - lo) / r_c
    if abs(q - round(q)) > 1e-9 * max(1.0, abs(q)):
        return math.floor(q)
    return int((Fraction(c) - Fraction(lo)) // Fraction(r_c))


def cell_coords(x: Sequence[float], d_min: Sequence[float], r_c: float) -> Tuple[int, ...]:
    """0-based cell coordinates floor((x - D_min) / r_c)."""
    return tuple(cell_floor(c, lo, r_c) for c, lo in zip(x, d_min))


def compartment_of(x: Sequence[float], w: int, grid: GridLike) -> int:
    """alpha: storage compartment of process w for a particle at x."""
    d = len(grid.I)
    own = to_vec(w, grid.I)
    offset = tuple(
        c - o + 3 for c, o in zip(cell_coords(x, grid.d_min, grid.r_c), own)
    )
    if any(not 1 <= c <= 3 for c in offset):
        raise ConstraintViolationError(
            f"Position {tuple(x)} is more than one cell away from process {w} "
            f"(compartment range, offset {offset})",
            constraint="compartment range",
        )
    return to_scalar(offset, pattern_dims(d))


# numpy forms


def strides_array(I: Sequence[int]) -> np.ndarray:
    return np.array(_strides(I), dtype=np.int64)


def to_vec_array(j: np.ndarray, I: Sequence[int]) -> np.ndarray:
    """Vectorised to_vec: (m,) scalar indices -> (m, d) index vectors."""
    j = np.asarray(j, dtype=np.int64)
    total = cell_count(I)
    if j.size and (j.min() < 1 or j.max() > total):
        raise IndexRangeError(f"Scalar indices outside [1, {total}] for I={tuple(I)}")
    dims = np.array(I, dtype=np.int64)
    return (j[..., None] - 1) // strides_array(I) % dims + 1


def to_scalar_array(v: np.ndarray, I: Sequence[int], check: bool = True) -> np.ndarray:
    """Vectorised to_scalar over the last axis of v."""
    v = np.asarray(v, dtype=np.int64)
    if check and v.size:
        dims = np.array(I, dtype=np.int64)
        if (v < 1).any() or (v > dims).any():
            raise IndexRangeError(f"Index vectors outside [1, {tuple(I)}]")
    return 1 + ((v - 1) * strides_array(I)).sum(axis=-1)


def strides_batch(shapes: np.ndarray) -> np.ndarray:
    """Strides of many shapes of one dimension: (S, d) -> (S, d)."""
    shapes = np.asarray(shapes, dtype=np.int64)
    strides = np.ones_like(shapes)
    strides[:, 1:] = np.cumprod(shapes[:, :-1], axis=1)
    return strides


def to_vec_batch(j: np.ndarray, shapes: np.ndarray) -> np.ndarray:
    """to_vec under every shape at once: (m,) indices x (S, d) shapes -> (S, m, d).

    No range check; callers pass indices valid for every shape.
    """
    shapes = np.asarray(shapes, dtype=np.int64)
    j = np.asarray(j, dtype=np.int64)
    return (j[None, :, None] - 1) // strides_batch(shapes)[:, None, :] % shapes[:, None, :] + 1


def to_scalar_batch(v: np.ndarray, shapes: np.ndarray) -> np.ndarray:
    """to_scalar under every shape at once: (S, m, d) vectors -> (S, m)."""
    v = np.asarray(v, dtype=np.int64)
    return 1 + ((v - 1) * strides_batch(shapes)[:, None, :]).sum(axis=-1)


def active_process_array(k: int, I: Sequence[int]) -> np.ndarray:
    """gamma(k, j) for every j of pattern k, in ascending j."""
    active, count = checkerboard_dims(k, I)
    if count == 0:
        return np.zeros(0, dtype=np.int64)
    pattern = np.array(to_vec(k, pattern_dims(len(I))), dtype=np.int64)
    vecs = to_vec_array(np.arange(1, count + 1), active) * 3 + pattern - 3
    return to_scalar_array(vecs, I)


def neighbor_process_array(t: np.ndarray, l: np.ndarray, I: Sequence[int]) -> np.ndarray:
    """beta over all (t, l) pairs: (m,) x (L,) -> (m, L), 0 where absent."""
    dims = np.array(I, dtype=np.int64)
    t_vec = to_vec_array(t, I)
    l_vec = to_vec_array(l, pattern_dims(len(I)))
    target = t_vec[:, None, :] + l_vec[None, :, :] - 2
    inside = ((target >= 1) & (target <= dims)).all(axis=-1)
    return np.where(inside, to_scalar_array(target, I, check=False), 0)


@dataclass(frozen=True)
class Addressing:
    """
    The neighbor addressing used by the runtime and the lemma checks.

    Swapping in a different ``beta`` lets the checks be tested against a
    broken addressing scheme.
    """

    beta: Callable[[int, int, Sequence[int]], Optional[int]] = neighbor_process
    beta_array: Callable[[np.ndarray, np.ndarray, Sequence[int]], np.ndarray] = (
        neighbor_process_array
    )


DEFAULT_ADDRESSING = Addressing()
