"""Tests for the method registry and the built-in particle methods."""

import math

import pytest

from cellpm.cell_grid import build_grid
from cellpm.exceptions import InstanceFormatError, UnknownMethodError
from cellpm.interpreter import run
from cellpm.methods import MethodParams, get_method, instantiate, list_methods, resolve_params
from cellpm.methods.instances import DYADIC_BITS, random_instance
from cellpm.methods.lattice_walk import hash_offsets, lattice_step
from cellpm.methods.sph_density import kernel
from cellpm.model import GlobalVar, Particle


def _params(name, **extra):
    return MethodParams(
        name=name,
        cutoff=1.0,
        domain_min=(0.0, 0.0),
        domain_max=(2.0, 2.0),
        t_max=2,
        params=extra,
    )


def test_list_methods_sorted():
    assert list_methods() == ["ExchangeDiffusion", "LatticeWalk", "SphDensity"]


def test_get_unknown_method():
    with pytest.raises(UnknownMethodError) as exc_info:
        get_method("Missing")
    assert "ExchangeDiffusion" in str(exc_info.value)


def test_exactness_flags():
    assert get_method("ExchangeDiffusion").exact
    assert get_method("LatticeWalk").exact
    assert not get_method("SphDensity").exact


def test_resolve_params_fills_defaults():
    assert resolve_params(_params("LatticeWalk")) == {"seed": 0, "resolution": 4}
    assert resolve_params(_params("LatticeWalk", seed=9))["seed"] == 9


def test_instantiate_rejects_unknown_parameter():
    with pytest.raises(InstanceFormatError) as exc_info:
        instantiate(_params("ExchangeDiffusion", speed=2))
    assert exc_info.value.field == "method.params"


def test_method_params_validation():
    with pytest.raises(ValueError):
        MethodParams(name="X", cutoff=0.0, domain_min=(0.0,), domain_max=(1.0,))
    with pytest.raises(ValueError):
        MethodParams(name="X", cutoff=1.0, domain_min=(0.0,), domain_max=(1.0, 1.0))


def test_exchange_diffusion_conserves_total():
    grid = build_grid((0.0, 0.0), (3.0, 3.0), 1.0)
    instance = random_instance("ExchangeDiffusion", 5, grid, 30, t_max=2)
    before = sum(p.prop("h") for p in instance.state.particles)
    after = sum(p.prop("h") for p in run(instance).particles)
    assert after == before


def test_lattice_step_is_strictly_below_cutoff():
    assert lattice_step(1.0, 1) == 0.5
    assert lattice_step(1.0, 2) == 0.5
    assert lattice_step(1.0, 3) == 0.5
    assert lattice_step(0.3, 2) == 0.125
    for d in (1, 2, 3, 4):
        step = lattice_step(1.0, d)
        assert math.dist((step,) * d, (0.0,) * d) < 1.0


def test_hash_offsets_are_bounded_and_deterministic():
    offsets = hash_offsets(1, 42, 3, 3, 4)
    assert offsets == hash_offsets(1, 42, 3, 3, 4)
    assert all(-4 <= o <= 4 for o in offsets)
    assert len(offsets) == 3


def test_lattice_walk_moves_within_cutoff_and_domain():
    params = _params("LatticeWalk", seed=3)
    spec = instantiate(params)
    p = Particle(id=0, x=(1.0, 1.0), props={"n": 2, "seen": 0})
    (moved,) = spec.evolve(GlobalVar(t=1, t_max=2), p)
    assert math.dist(moved.x, p.x) < 1.0
    assert moved.prop("seen") == 2
    assert moved.prop("n") == 0

    (clamped,) = spec.evolve(GlobalVar(t=1, t_max=2), p.moved_to((0.0, 0.0)))
    assert all(0.0 <= c < 2.0 for c in clamped.x)


def test_sph_density_kernel_sum():
    params = _params("SphDensity", mass=2.0)
    spec = instantiate(params)
    p = Particle(id=0, x=(0.5, 0.5), props={"rho": 0.0, "rho_acc": 0.0})
    q = Particle(id=1, x=(1.0, 0.5), props={"rho": 0.0, "rho_acc": 0.0})
    interacted = spec.interact(GlobalVar(), p, q)
    assert interacted.prop("rho_acc") == pytest.approx(2.0 * kernel(0.5, 1.0))
    (evolved,) = spec.evolve(GlobalVar(), interacted)
    assert evolved.prop("rho") == pytest.approx(0.5)
    assert evolved.prop("rho_acc") == 0.0
    assert evolved.x == p.x


def test_sph_density_velocity_reflects_at_wall():
    spec = instantiate(_params("SphDensity", velocity=[0.5, 0.0]))
    p = Particle(id=0, x=(1.75, 1.0), props={"rho": 0.0, "rho_acc": 0.0})
    (moved,) = spec.evolve(GlobalVar(), p)
    assert moved.x == (1.75, 1.0)
    (moved,) = spec.evolve(GlobalVar(), p.moved_to((1.0, 1.0)))
    assert moved.x == (1.5, 1.0)


def test_sph_density_rejects_fast_velocity():
    with pytest.raises(InstanceFormatError):
        instantiate(_params("SphDensity", velocity=[1.0, 1.0]))
    with pytest.raises(InstanceFormatError):
        instantiate(_params("SphDensity", velocity=[0.5]))


def test_random_instance_is_reproducible_and_dyadic():
    grid = build_grid((0.0, 0.0), (2.5, 2.5), 1.0)
    a = random_instance("LatticeWalk", 4, grid, 25)
    b = random_instance("LatticeWalk", 4, grid, 25)
    assert a.state == b.state
    scale = 2.0**DYADIC_BITS
    for p in a.state.particles:
        assert all((c * scale).is_integer() for c in p.x)
        assert grid.domain.contains(p.x)


def test_random_instance_rejects_negative_count():
    grid = build_grid((0.0,), (1.0,), 1.0)
    with pytest.raises(ValueError):
        random_instance("ExchangeDiffusion", 0, grid, -1)
