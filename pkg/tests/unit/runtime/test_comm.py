"""Tests for the communication log and its audit."""

from cellpm.runtime import CommEvent, CommLog, audit_communications, parallel_run_traced
from cellpm.methods.instances import random_instance
from cellpm.cell_grid import build_grid


def test_csv_columns():
    log = CommLog()
    log.record(CommEvent(1, 2, 5, 4, "copy", 3))
    log.record(CommEvent(1, 2, 5, 6, "collect", 0))
    assert log.to_csv().splitlines() == [
        "phase,k,reader,target,kind,payload_size",
        "1,2,5,4,copy,3",
        "1,2,5,6,collect,0",
    ]


def test_write_csv(tmp_path):
    log = CommLog([CommEvent(1, 1, 1, 2, "copy", 1)])
    path = tmp_path / "comm.csv"
    log.write_csv(str(path))
    assert path.read_text() == log.to_csv()


def test_select_by_step_and_kind():
    log = CommLog()
    log.extend(
        [
            CommEvent(1, 1, 1, 2, "copy", 0),
            CommEvent(1, 1, 1, 2, "collect", 0),
            CommEvent(2, 1, 1, 2, "copy", 0),
        ]
    )
    assert len(log.select(step=1)) == 2
    assert len(log.select(kind="copy")) == 2
    assert len(log.select(step=2, kind="collect")) == 0


def test_audit_accepts_disjoint_pulls():
    events = [
        CommEvent(1, 1, 1, 2, "copy", 0),
        CommEvent(1, 1, 4, 3, "copy", 0),
        CommEvent(1, 1, 4, 5, "copy", 0),
    ]
    report = audit_communications(events)
    assert report.ok
    assert report.events == 3
    assert report.phases == 1


def test_audit_flags_shared_target():
    events = [
        CommEvent(1, 1, 1, 2, "copy", 0),
        CommEvent(1, 1, 3, 2, "copy", 0),
    ]
    report = audit_communications(events)
    assert not report.ok
    assert report.violations[0].target == 2
    assert report.violations[0].readers == (1, 3)
    assert report.violations[0].reason == "target shared by readers"


def test_audit_flags_reader_that_is_pulled_from():
    events = [
        CommEvent(1, 1, 1, 4, "copy", 0),
        CommEvent(1, 1, 4, 7, "copy", 0),
    ]
    report = audit_communications(events)
    reasons = {v.reason for v in report.violations}
    assert reasons == {"reader is a target"}
    assert report.to_dict()["ok"] is False


def test_same_target_in_different_phases_is_fine():
    events = [
        CommEvent(1, 1, 1, 2, "copy", 0),
        CommEvent(1, 2, 3, 2, "copy", 0),
    ]
    assert audit_communications(events).ok


def test_real_run_passes_audit():
    grid = build_grid((0.0, 0.0), (4.5, 3.5), 1.0)
    instance = random_instance("ExchangeDiffusion", 3, grid, 40, t_max=3)
    trajectory = parallel_run_traced(instance, grid)
    report = audit_communications(trajectory.comm_log.events)
    assert report.ok
    assert report.events == len(trajectory.comm_log)
    # 2 steps x (copy + collect) x 9 patterns, all non-empty on a 5 x 4 grid
    assert report.phases == 2 * 2 * 9
