"""Tests for the verify command handler."""

from cellpm.cell_grid import build_grid
from cellpm.commands.verify import handle_command
from cellpm.methods.instances import random_instance
from tests.fixtures.instances import write_instance_file


def test_verify_swap_instance(swap_file):
    result = handle_command(instance=str(swap_file), trials=50)

    assert result.success
    assert result.exit_code == 0
    data = result.data
    assert data["ok"]
    assert data["digest_seq"] == data["digest_par"]
    assert data["equivalence"]["match"]
    assert data["audit"]["ok"]
    assert data["motion"]["ok"]
    assert data["laws"]["trials"] == 50


def test_verify_random_lattice_walk(tmp_path):
    grid = build_grid((0.0, 0.0), (3.5, 3.5), 1.0)
    instance = random_instance("LatticeWalk", 8, grid, 40, t_max=3)
    path = write_instance_file(tmp_path / "walk.json", instance)

    result = handle_command(instance=str(path), trials=20, mode="concurrent")
    assert result.success, result.data["equivalence"]["particle_diff"][:3]


def test_verify_needs_exactly_one_target(swap_file):
    neither = handle_command()
    assert not neither.success
    assert neither.exit_code == 2

    both = handle_command(instance=str(swap_file), suite="lemmas")
    assert both.exit_code == 2


def test_verify_missing_file_is_an_input_error(tmp_path):
    result = handle_command(instance=str(tmp_path / "absent.json"))
    assert result.exit_code == 2


def test_lemma_suite(tmp_path):
    result = handle_command(suite="lemmas", max_cells=9, dims=[1, 2])

    assert result.success
    assert result.data["suite"] == "lemmas"
    assert result.data["max_cells"] == 9
    assert result.data["dims"] == [1, 2]
    assert all(lemma["ok"] for lemma in result.data["lemmas"])
