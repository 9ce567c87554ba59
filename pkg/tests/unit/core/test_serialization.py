"""Tests for instance files and canonical state dumps."""

import json

import pytest

from cellpm.exceptions import DomainViolationError, InstanceFormatError, UnknownMethodError
from cellpm.interpreter import run
from cellpm.serialization import (
    dumps_instance,
    dumps_state,
    load_instance,
    loads_instance,
    state_digest,
    write_trace,
)
from tests.fixtures.instances import instance_document, swap_instance, write_document


def test_load_instance_file(swap_file):
    instance = load_instance(swap_file)
    assert instance.method.name == "ExchangeDiffusion"
    assert instance.d == 1
    assert instance.state.g.t_max == 2
    assert [p.prop("h") for p in instance.state.particles] == [10, 4]


def test_dump_load_dump_is_byte_identical():
    text = dumps_instance(swap_instance())
    assert dumps_instance(loads_instance(text)) == text


def test_state_dump_round_trip_through_instance(swap):
    """Dumps sort particles by id and keep integer properties as integers."""
    text = dumps_state(swap.state)
    document = json.loads(text)
    assert [p["id"] for p in document["particles"]] == [0, 1]
    assert document["particles"][0]["props"] == {"h": 10, "a": 0, "c": 0}
    assert document["global"] == {"t": 1, "t_max": 2}


def test_digest_independent_of_particle_order(swap):
    reversed_state = type(swap.state)(g=swap.state.g, particles=swap.state.particles[::-1])
    assert state_digest(reversed_state) == state_digest(swap.state)
    assert state_digest(run(swap)) != state_digest(swap.state)


def test_global_extras_are_kept():
    document = instance_document()
    document["global"]["dt"] = 0.5
    instance = loads_instance(json.dumps(document))
    assert instance.state.g.extra("dt") == 0.5


def test_malformed_json(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"dimension": 1,')
    with pytest.raises(InstanceFormatError) as exc_info:
        load_instance(path)
    assert exc_info.value.field == "<root>"


def test_missing_file(tmp_path):
    with pytest.raises(InstanceFormatError):
        load_instance(tmp_path / "absent.json")


def test_schema_error_names_field():
    document = instance_document()
    document["particles"][1]["x"] = ["left"]
    with pytest.raises(InstanceFormatError) as exc_info:
        loads_instance(json.dumps(document))
    assert exc_info.value.field == "particles.1.x.0"


def test_unknown_top_level_field_rejected():
    document = instance_document()
    document["extra"] = 1
    with pytest.raises(InstanceFormatError):
        loads_instance(json.dumps(document))


def test_exact_method_rejects_non_binary_fraction():
    """0.1 has no exact double, so an exact method refuses it."""
    text = json.dumps(instance_document()).replace("0.25", "0.1")
    with pytest.raises(InstanceFormatError) as exc_info:
        loads_instance(text)
    assert exc_info.value.field == "particles.0.x.0"


def test_float_method_accepts_non_binary_fraction():
    document = instance_document(
        method="SphDensity",
        particles=[{"id": 0, "x": [0.1], "props": {"rho": 0.0, "rho_acc": 0.0}}],
    )
    instance = loads_instance(json.dumps(document))
    assert instance.state.particles[0].x == (0.1,)


def test_dimension_mismatch():
    document = instance_document()
    document["particles"][0]["x"] = [0.25, 0.25]
    with pytest.raises(InstanceFormatError) as exc_info:
        loads_instance(json.dumps(document))
    assert exc_info.value.field == "particles.0.x"

    document = instance_document()
    document["domain"]["max"] = [1.0, 1.0]
    with pytest.raises(InstanceFormatError):
        loads_instance(json.dumps(document))


def test_unknown_method():
    with pytest.raises(UnknownMethodError):
        loads_instance(json.dumps(instance_document(method="Nope")))


def test_particle_outside_domain():
    document = instance_document()
    document["particles"][0]["x"] = [1.0]
    with pytest.raises(DomainViolationError):
        loads_instance(json.dumps(document))


def test_inverted_domain_is_a_format_error():
    document = instance_document()
    document["domain"] = {"min": [1.0], "max": [0.0]}
    document["particles"] = []
    with pytest.raises(InstanceFormatError) as exc_info:
        loads_instance(json.dumps(document))
    assert exc_info.value.field == "method"


def test_write_trace_writes_one_line_per_state(tmp_path, swap):
    path = write_trace(tmp_path / "trace.jsonl", [swap.state, run(swap)])
    lines = path.read_text().splitlines()
    assert len(lines) == 2
    assert json.loads(lines[1])["global"]["t"] == 2


def test_file_written_by_helper(tmp_path):
    path = write_document(tmp_path / "doc.json", instance_document())
    assert load_instance(path).state.g.t == 1
