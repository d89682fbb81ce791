import math

import numpy as np
import pytest

from neelwall.local_model import (allen_cahn_residual, hamiltonian, hamiltonian_zero_set,
                                  local_heteroclinic, local_nonexistence_probe,
                                  shoot_adjacent, wall_wells)
from neelwall.profile import AnisotropyParams


def test_gudermannian_wall():
    params = AnisotropyParams(0.0)
    wall = local_heteroclinic(params)
    assert abs(wall.exchange_integral() - 2.0) <= 1e-4
    # equipartition of the local model
    assert wall.exchange_integral() == pytest.approx(wall.potential_integral(params), rel=1e-4)
    gd = 2 * np.arctan(np.tanh(wall.t / 2))
    assert np.max(np.abs(wall.phi - gd)) < 1e-6
    assert allen_cahn_residual(params, wall) < 1e-4


@pytest.mark.parametrize("h,kind", [(0.5, "small"), (0.5, "large"), (2.0, "small")])
def test_heteroclinic_degrees(h, kind):
    params = AnisotropyParams(h)
    wall = local_heteroclinic(params, kind=kind)
    w0, w1 = wall_wells(params, kind)
    assert wall.degree == pytest.approx((w1 - w0) / (2 * math.pi))
    mirror = local_heteroclinic(params, direction=-1, kind=kind)
    assert mirror.degree == pytest.approx(-wall.degree)
    assert allen_cahn_residual(params, wall) < 1e-3


def test_wall_kind_validation():
    with pytest.raises(ValueError):
        wall_wells(AnisotropyParams(0.5), "medium")
    with pytest.raises(ValueError):
        local_heteroclinic(AnisotropyParams(0.5), direction=0)


def test_zero_set_arcs_join_consecutive_wells():
    for h in (0.5, 2.0):
        zs = hamiltonian_zero_set(AnisotropyParams(h))
        assert zs.components and zs.all_consecutive
        for c in zs.components:
            assert np.max(np.abs(hamiltonian(AnisotropyParams(h), c.x1, c.x2))) < 1e-12


@pytest.mark.parametrize("h,d", [(2.0, 2.0), (0.5, 1.0)])
def test_no_inadmissible_connections(h, d):
    rep = local_nonexistence_probe(AnisotropyParams(h), d, n_slopes=40)
    assert rep.connections == 0
    assert rep.max_drift <= 1e-8
    assert sum(rep.counts().values()) == 40


def test_probe_random_slopes_seeded():
    a = local_nonexistence_probe(AnisotropyParams(2.0), 2.0, n_slopes=10, seed=42)
    b = local_nonexistence_probe(AnisotropyParams(2.0), 2.0, n_slopes=10, seed=42)
    assert [r.slope for r in a.runs] == [r.slope for r in b.runs]


def test_adjacent_shot_approaches_next_well():
    params = AnisotropyParams(0.5)
    sol = shoot_adjacent(params)
    assert abs(sol.y[0, -1] - params.alpha) < 1e-2
