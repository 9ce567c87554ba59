"""
Tests for the run command handler.

Uses real instance files written to a temporary directory and the real
interpreters; nothing is mocked.
"""

import json

from cellpm.commands.run import handle_command, storage_view
from cellpm.cell_grid import distribute_initial, grid_for
from tests.fixtures.instances import instance_document, write_document


def test_sequential_run_writes_final_state_and_report(swap_file, tmp_path):
    out = tmp_path / "out"
    result = handle_command(instance=str(swap_file), engine="seq", out=str(out))

    assert result.success
    assert result.exit_code == 0
    assert result.data["T"] == 2
    assert result.data["t"] == 2
    assert result.data["particle_count"] == 2
    assert result.data["mode"] is None
    assert "audit" not in result.data

    final = json.loads((out / "final_state.json").read_text())
    assert [p["props"]["h"] for p in final["particles"]] == [4, 10]
    report = json.loads((out / "report.json").read_text())
    assert report["digest"] == result.data["digest"]


def test_distributed_run_writes_audit(swap_file, tmp_path):
    out = tmp_path / "par"
    result = handle_command(instance=str(swap_file), engine="par", mode="reference", out=str(out))

    assert result.success
    assert result.data["mode"] == "reference"
    assert result.data["audit"]["ok"]
    csv_lines = (out / "comm_audit.csv").read_text().splitlines()
    assert csv_lines[0] == "phase,k,reader,target,kind,payload_size"
    assert len(csv_lines) - 1 == result.data["audit"]["events"]
    assert set(result.data["timings"][0]) == {"copy", "step", "dist", "collect"}


def test_engines_produce_the_same_digest(swap_file, tmp_path):
    seq = handle_command(instance=str(swap_file), engine="seq", out=str(tmp_path / "a"))
    par = handle_command(
        instance=str(swap_file), engine="par", mode="concurrent", out=str(tmp_path / "b")
    )
    assert seq.data["digest"] == par.data["digest"]
    assert (tmp_path / "a" / "final_state.json").read_bytes() == (
        tmp_path / "b" / "final_state.json"
    ).read_bytes()


def test_trace_writes_every_state(swap_file, tmp_path):
    out = tmp_path / "trace"
    for engine in ("seq", "par"):
        result = handle_command(instance=str(swap_file), engine=engine, out=str(out), trace=True)
        assert result.success
        lines = (out / "trace.jsonl").read_text().splitlines()
        assert len(lines) == result.data["T"] == 2


def test_procs_view(swap_file, tmp_path):
    result = handle_command(
        instance=str(swap_file), engine="seq", out=str(tmp_path), procs_view=True
    )
    procs = result.data["procs"]
    assert [p["process"] for p in procs] == [1, 2]
    assert procs[0]["center"] == 2
    assert procs[0]["compartments"] == [0, 2, 0]


def test_storage_view(swap):
    view = storage_view(distribute_initial(swap, grid_for(swap)))
    assert view == [
        {"process": 1, "center": 2, "compartments": [0, 2, 0]},
        {"process": 2, "center": 0, "compartments": [0, 0, 0]},
    ]


def test_bad_instance_file_is_an_input_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("[]")
    result = handle_command(instance=str(path), out=str(tmp_path))
    assert not result.success
    assert result.exit_code == 2


def test_method_parameter_error_is_an_input_error(tmp_path):
    document = instance_document(
        method="SphDensity",
        params={"velocity": [0.5]},
        particles=[{"id": 3, "x": [0.75], "props": {"rho": 0.0, "rho_acc": 0.0}}],
    )
    document["cutoff"] = 0.25
    path = write_document(tmp_path / "fast.json", document)
    result = handle_command(instance=str(path), out=str(tmp_path))
    assert not result.success
    assert result.exit_code == 2
    assert result.data["field"] == "method.params.velocity"


def test_non_termination_exit_code(swap_file, tmp_path):
    document = json.loads(swap_file.read_text())
    document["global"]["t_max"] = 10
    path = write_document(tmp_path / "long.json", document)
    result = handle_command(instance=str(path), out=str(tmp_path), max_iterations=2)
    assert not result.success
    assert result.exit_code == 1
    assert result.data["iterations"] == 2
