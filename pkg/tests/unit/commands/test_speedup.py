"""Tests for the speedup command handler and sweep parsing."""

import pytest

from cellpm.commands.speedup import handle_command, parse_sweep
from cellpm.exceptions import UsageError


def test_parse_sweep_integer_points():
    assert parse_sweep("1:5") == [1, 2, 3, 4, 5]
    assert parse_sweep("1:10:3") == [1, 4, 7, 10]
    assert all(isinstance(x, int) for x in parse_sweep("0:4:2"))


def test_parse_sweep_float_points():
    assert parse_sweep("0.5:2:0.5") == [0.5, 1.0, 1.5, 2.0]


@pytest.mark.parametrize("text", ["5:1", "1", "1:2:0", "a:b", "1:2:3:4", "1:5:-1"])
def test_parse_sweep_rejects(text):
    with pytest.raises(UsageError):
        parse_sweep(text)


def test_amdahl_sweep(tmp_path):
    out = tmp_path / "curves" / "amdahl.csv"
    result = handle_command(model="amdahl", sweep="1:1000:1", out=str(out))

    assert result.success
    values = [row["speedup"] for row in result.data["rows"]]
    assert len(values) == 1000
    assert values[0] == 1.0
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert len(set(values[899:])) == 1
    assert result.data["continuity"]["agree"]
    assert result.data["assignment"]["branch"] == "saturated"

    lines = out.read_text().splitlines()
    assert lines[0] == "model,n_CPU,speedup"
    assert len(lines) == 1001
    assert result.data["out"] == str(out)


def test_gustafson_sweep():
    result = handle_command(model="gustafson", sweep="1:900:1")
    values = [row["speedup"] for row in result.data["rows"]]
    assert values[0] == 1.0
    assert values[-1] > 0.5 * 900 / 9
    assert "out" not in result.data
    assert result.data["csv"].startswith("model,n_CPU,speedup\n")


def test_cell_sweep_uses_particle_count_axis():
    result = handle_command(model="cell", sweep="1000:10000:1000")
    assert result.data["x_label"] == "N_p_max"
    values = [row["speedup"] for row in result.data["rows"]]
    assert values == sorted(values)
    assert "continuity" not in result.data


def test_model_constants_are_passed_through():
    result = handle_command(model="amdahl", sweep="1:2", d=1, n_cell=99)
    assert result.success
    assert result.data["params"]["d"] == 1
    assert result.data["params"]["n_cell"] == 99


def test_indivisible_cell_count_is_an_input_error():
    result = handle_command(model="amdahl", sweep="1:4", n_cell=100)
    assert not result.success
    assert result.exit_code == 2


def test_bad_sweep_is_an_input_error():
    result = handle_command(model="cell", sweep="9:1")
    assert result.exit_code == 2
