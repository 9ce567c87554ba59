"""Tests for the index translations of the cell grid and checkerboard."""

import math

import numpy as np
import pytest

from cellpm.cell_grid import build_grid, cell_of
from cellpm.exceptions import (
    ConstraintViolationError,
    IndexOverflowError,
    IndexRangeError,
)
from cellpm.index_space import (
    active_process,
    active_process_array,
    active_processes,
    cell_count,
    cell_floor,
    center_compartment,
    checkerboard_dims,
    compartment_of,
    grid_dims,
    mirror_compartment,
    neighbor_process,
    neighbor_process_array,
    to_scalar,
    to_scalar_array,
    to_scalar_batch,
    to_vec,
    to_vec_array,
    to_vec_batch,
)


def test_to_vec_first_dimension_fastest():
    assert to_vec(1, (3, 3)) == (1, 1)
    assert to_vec(2, (3, 3)) == (2, 1)
    assert to_vec(4, (3, 3)) == (1, 2)
    assert to_vec(5, (3, 3)) == (2, 2)
    assert to_vec(9, (3, 3)) == (3, 3)


def test_to_scalar_inverts_to_vec():
    assert to_scalar((2, 2), (3, 3)) == 5
    for j in range(1, 25):
        assert to_scalar(to_vec(j, (2, 3, 4)), (2, 3, 4)) == j


def test_to_vec_rejects_out_of_range():
    with pytest.raises(IndexRangeError):
        to_vec(0, (3, 3))
    with pytest.raises(IndexRangeError):
        to_vec(10, (3, 3))


def test_to_scalar_rejects_out_of_range():
    with pytest.raises(IndexRangeError):
        to_scalar((0, 1), (3, 3))
    with pytest.raises(IndexRangeError):
        to_scalar((1, 4), (3, 3))
    with pytest.raises(IndexRangeError):
        to_scalar((1,), (3, 3))


def test_grid_dims_validation():
    assert grid_dims([2, 3]) == (2, 3)
    with pytest.raises(IndexRangeError):
        grid_dims([])
    with pytest.raises(IndexRangeError):
        grid_dims([3, 0])


def test_cell_count_overflow():
    """Index spaces beyond the signed 64-bit range are rejected."""
    with pytest.raises(IndexOverflowError):
        cell_count((2**32, 2**32))


def test_center_compartment():
    assert center_compartment(1) == 2
    assert center_compartment(2) == 5
    assert center_compartment(3) == 14


def test_checkerboard_dims():
    assert checkerboard_dims(1, (9, 9)) == ((3, 3), 9)
    assert checkerboard_dims(9, (4, 4)) == ((1, 1), 1)
    assert checkerboard_dims(1, (4, 4)) == ((2, 2), 4)


def test_checkerboard_dims_small_grid_has_empty_patterns():
    """Patterns whose first cell lies outside the grid have no active processes."""
    assert checkerboard_dims(5, (1, 1)) == ((0, 0), 0)
    assert active_processes(5, (1, 1)) == ()


def test_active_process():
    assert active_process(1, 1, (9, 9)) == 1
    assert active_process(1, 2, (9, 9)) == 4
    assert active_process(1, 4, (9, 9)) == 28
    assert active_process(5, 1, (9, 9)) == 11


def test_active_process_rejects_bad_j():
    with pytest.raises(IndexRangeError):
        active_process(1, 10, (9, 9))


def test_active_processes_partition_the_grid():
    """Every process reads in exactly one pattern."""
    I = (5, 4)
    seen = [w for k in range(1, 10) for w in active_processes(k, I)]
    assert sorted(seen) == list(range(1, 21))


def test_neighbor_process():
    assert neighbor_process(5, 5, (3, 3)) == 5
    assert neighbor_process(5, 6, (3, 3)) == 6
    assert neighbor_process(5, 1, (3, 3)) == 1
    assert neighbor_process(5, 9, (3, 3)) == 9


def test_neighbor_process_off_grid_is_none():
    assert neighbor_process(1, 1, (3, 3)) is None
    assert neighbor_process(3, 3, (3, 3)) is None
    assert neighbor_process(1, 3, (3,)) == 2
    assert neighbor_process(3, 3, (3,)) is None


def test_mirror_compartment():
    assert mirror_compartment(1, 2) == 9
    assert mirror_compartment(5, 2) == 5
    assert mirror_compartment(6, 2) == 4
    assert mirror_compartment(1, 1) == 3


def test_mirror_faces_back():
    """beta(beta(t, l), mirror(l)) == t wherever the neighbor exists."""
    I = (4, 3)
    for t in range(1, 13):
        for l in range(1, 10):
            target = neighbor_process(t, l, I)
            if target is not None:
                assert neighbor_process(target, mirror_compartment(l, 2), I) == t


def test_compartment_of():
    grid = build_grid((0.0, 0.0), (2.5, 2.5), 1.0)
    assert grid.I == (3, 3)
    assert compartment_of((1.5, 1.5), 5, grid) == 5
    assert compartment_of((2.3, 1.4), 5, grid) == 6
    assert compartment_of((0.1, 0.1), 5, grid) == 1


def test_compartment_of_rejects_distant_position():
    grid = build_grid((0.0, 0.0), (2.5, 2.5), 1.0)
    with pytest.raises(ConstraintViolationError) as exc_info:
        compartment_of((2.3, 2.3), 1, grid)
    assert exc_info.value.constraint == "compartment range"


def test_array_forms_match_scalar_forms():
    I = (4, 3, 2)
    j = np.arange(1, 25)
    vecs = to_vec_array(j, I)
    assert [tuple(v) for v in vecs] == [to_vec(int(x), I) for x in j]
    assert list(to_scalar_array(vecs, I)) == list(j)
    for k in range(1, 28):
        assert list(active_process_array(k, I)) == list(active_processes(k, I))


def test_neighbor_array_uses_zero_for_absent():
    I = (3, 3)
    table = neighbor_process_array(np.arange(1, 10), np.arange(1, 10), I)
    for t in range(1, 10):
        for l in range(1, 10):
            expected = neighbor_process(t, l, I)
            assert table[t - 1, l - 1] == (0 if expected is None else expected)


def test_to_vec_array_range_check():
    with pytest.raises(IndexRangeError):
        to_vec_array(np.array([0, 1]), (3,))


def test_batch_forms_match_single_shape_forms():
    shapes = np.array([(6, 1, 1), (3, 2, 1), (1, 2, 3), (2, 3, 1)])
    j = np.arange(1, 7)
    vecs = to_vec_batch(j, shapes)
    assert vecs.shape == (4, 6, 3)
    for row, I in enumerate(shapes):
        I = tuple(int(i) for i in I)
        assert np.array_equal(vecs[row], to_vec_array(j, I))
    assert np.array_equal(to_scalar_batch(vecs, shapes), np.tile(j, (4, 1)))


def test_cell_floor_is_exact_at_boundaries():
    assert cell_floor(0.7, 0.0, 0.35) == 2
    assert cell_floor(math.nextafter(1.0, 0.0), 0.0, 1.0) == 0
    # 1.0 - 1e-17 rounds to 1.0 in floats but lies in cell 0
    assert (1.0 - 1e-17) / 1.0 == 1.0
    assert cell_floor(1.0, 1e-17, 1.0) == 0
    assert cell_floor(2.5, 0.0, 1.0) == 2


def test_grid_dims_agree_with_exact_cells():
    grid = build_grid((1e-17,), (2.0,), 1.0)
    assert grid.I == (2,)
    assert cell_of((math.nextafter(2.0, 0.0),), grid) == 2
