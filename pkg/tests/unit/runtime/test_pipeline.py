"""Tests for the copy, step, dist and collect stages of the distributed interpreter."""

import pytest

from cellpm.cell_grid import build_grid, distribute_initial, grid_for
from cellpm.exceptions import ConstraintViolationError, NonTerminationError, UsageError
from cellpm.index_space import neighbor_process
from cellpm.methods import instantiate
from cellpm.runtime import (
    CommLog,
    collect_all,
    copy_all,
    dist_all,
    parallel_run,
    parallel_run_traced,
    parallel_step,
    step_all,
)
from cellpm.serialization import state_digest
from tests.fixtures.instances import drift_spec, exchange_instance, swap_instance


def _single_center_instance():
    """One particle in the middle cell of a 3 x 3 grid."""
    return exchange_instance([(1.5, 1.5)], [7], d_min=(0.0, 0.0), d_max=(2.5, 2.5))


def test_copy_fills_ghosts_from_neighbors():
    instance = _single_center_instance()
    grid = grid_for(instance)
    state = copy_all(distribute_initial(instance, grid), grid)

    for w in range(1, 10):
        storage = state.process(w)
        for l in range(1, 10):
            if l == grid.center:
                continue
            expected = 1 if neighbor_process(w, l, grid.I) == 5 else 0
            assert len(storage.compartment(l)) == expected
    assert [p.id for p in state.process(1).compartment(9)] == [0]
    assert [p.id for p in state.process(9).compartment(1)] == [0]


def test_copy_logs_one_pull_per_defined_neighbor():
    instance = _single_center_instance()
    grid = grid_for(instance)
    log = CommLog()
    copy_all(distribute_initial(instance, grid), grid, log=log, step=1)

    # corner processes have 3 neighbors, edges 5, the middle 8
    assert len(log) == 4 * 3 + 4 * 5 + 8
    assert {e.kind for e in log.events} == {"copy"}
    assert sum(e.payload_size for e in log.events) == 8


def test_step_all_interacts_with_ghosts(swap):
    spec = instantiate(swap.method)
    grid = grid_for(swap)
    state = copy_all(distribute_initial(swap, grid), grid)
    stepped = step_all(state, spec, grid)
    assert [p.prop("h") for p in stepped.process(1).center] == [4, 10]


def test_dist_and_collect_move_crossing_particle():
    """A particle drifting from cell 1 into cell 2 ends in process 2's center."""
    instance = exchange_instance([(0.75,)], [1], d_min=(0.0,), d_max=(1.5,))
    grid = grid_for(instance)
    assert grid.I == (2,)
    spec = drift_spec(0.5)

    state = distribute_initial(instance, grid)
    state = step_all(copy_all(state, grid), spec, grid)
    state = dist_all(state, grid)
    assert [p.x for p in state.process(1).compartment(3)] == [(1.25,)]
    assert state.process(1).center == ()

    state = collect_all(state, grid)
    assert [p.id for p in state.process(2).center] == [0]
    assert state.process(1).center == ()


def test_dist_reports_compartment_range_violation():
    grid = build_grid((0.0,), (3.5,), 1.0)
    instance = exchange_instance([(0.5,)], [1], d_min=(0.0,), d_max=(3.5,))
    state = distribute_initial(instance, grid)
    moved = state.with_storages(
        [state.process(1).with_center([state.process(1).center[0].moved_to((2.5,))])]
        + list(state.storages[1:])
    )
    with pytest.raises(ConstraintViolationError) as exc_info:
        dist_all(moved, grid)
    assert exc_info.value.constraint == "compartment range"
    assert exc_info.value.particle_id == 0


def test_parallel_step_advances_every_global(swap):
    spec = instantiate(swap.method)
    grid = grid_for(swap)
    state = parallel_step(distribute_initial(swap, grid), spec, grid)
    assert {g.t for g in state.globals} == {2}


def test_parallel_step_after_stop_is_a_usage_error():
    instance = swap_instance(t_max=1)
    grid = grid_for(instance)
    with pytest.raises(UsageError):
        parallel_step(distribute_initial(instance, grid), instantiate(instance.method), grid)


def test_parallel_run_swap_matches_sequential_values():
    final = parallel_run(swap_instance(t_max=3))
    assert sorted((p.id, p.prop("h")) for p in final.center_particles()) == [(0, 10), (1, 4)]


def test_parallel_run_traced_records_states_and_timings(swap):
    trajectory = parallel_run_traced(swap, keep_states=True)
    assert trajectory.T == 2
    assert len(trajectory.states) == 2
    assert len(trajectory.timings) == 1
    assert set(trajectory.timings[0]) == {"copy", "step", "dist", "collect"}
    assert state_digest(trajectory.states[0]) == state_digest(swap.state)


def test_parallel_run_final_instance_visits_one_state():
    trajectory = parallel_run_traced(swap_instance(t_max=1))
    assert trajectory.T == 1
    assert len(trajectory.comm_log) == 0


def test_parallel_non_termination_guard():
    with pytest.raises(NonTerminationError):
        parallel_run_traced(swap_instance(t_max=20), max_iterations=3)


def test_collect_leaves_outgoing_compartments_until_next_copy():
    """Outgoing compartments are stale after collect and overwritten by copy."""
    instance = exchange_instance([(0.75,)], [1], d_min=(0.0,), d_max=(1.5,))
    grid = grid_for(instance)
    state = distribute_initial(instance, grid)
    state = dist_all(step_all(copy_all(state, grid), drift_spec(0.5), grid), grid)
    state = collect_all(state, grid)
    assert len(state.process(1).compartment(3)) == 1

    state = copy_all(state, grid)
    assert [p.id for p in state.process(1).compartment(3)] == [0]
    assert state.process(2).compartment(1) == ()
