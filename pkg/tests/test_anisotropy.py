import math

import numpy as np
import pytest

from neelwall.anisotropy import (GAMMA, gamma_lower_bound_check, largest_feasible_gamma,
                                 potential, w_second, w_value)
from neelwall.profile import AnisotropyParams


@pytest.mark.parametrize("h", [0.0, 0.3, 0.5, 0.95, 1.5, 2.0])
def test_potential_matches_polynomial_form(h):
    p = AnisotropyParams(h)
    phi = np.linspace(-7, 7, 1001)
    c = np.cos(phi)
    k = p.k
    ref = 0.5 * (c * c - 2 * h * c + 2 * h * k - k * k)
    assert np.allclose(w_value(p, phi), ref, atol=1e-13)


@pytest.mark.parametrize("h", [0.2, 0.5, 2.0])
def test_derivatives_by_finite_differences(h):
    p = AnisotropyParams(h)
    phi = np.linspace(-4, 4, 301)
    eps = 1e-6
    fd1 = (w_value(p, phi + eps) - w_value(p, phi - eps)) / (2 * eps)
    assert np.allclose(potential(p, phi).dw_dphi, fd1, atol=1e-8)
    fd2 = (potential(p, phi + eps).dw_dphi - potential(p, phi - eps).dw_dphi) / (2 * eps)
    assert np.allclose(w_second(p, phi), fd2, atol=1e-8)


def test_zero_exactly_at_wells():
    p = AnisotropyParams(0.5)
    wells = p.well_phases(-10, 10)
    assert np.all(w_value(p, wells) < 1e-30)
    assert w_value(AnisotropyParams(2.0), 2 * math.pi) < 1e-30


def test_scalar_input_returns_float():
    pe = potential(AnisotropyParams(0.5), 0.3)
    assert isinstance(pe.w, float) and isinstance(pe.dw_dphi, float)


def test_gamma_bound_holds_on_range():
    phi = np.linspace(-math.pi, math.pi, 2001)
    for h in (0.0, 0.3, 0.7, 0.99, 1.01, 2.0, 5.0):
        assert np.all(gamma_lower_bound_check(AnisotropyParams(h), phi))


def test_gamma_value_is_feasible_and_one_tenth_is_not():
    gmax = largest_feasible_gamma(np.linspace(0.01, math.pi / 2, 60))
    assert GAMMA <= gmax < 0.1
    phi = np.linspace(-math.pi, math.pi, 2001)
    assert not np.all(gamma_lower_bound_check(AnisotropyParams(0.0), phi, gamma=0.1))


def test_gamma_check_rejects_out_of_range():
    with pytest.raises(ValueError):
        gamma_lower_bound_check(AnisotropyParams(0.5), 4.0)
