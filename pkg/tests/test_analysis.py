import math

import numpy as np
import pytest

from neelwall.analysis import (DecayFit, cubic_growth_study, fit_decay, fit_tail_decay,
                               h2_tail_check, pointwise_lambda_bound_check, symmetry_metrics)
from neelwall.profile import AnisotropyParams, Grid, make_profile


def test_fit_decay_synthetic_exponential():
    x = np.linspace(2, 20, 200)
    f = fit_decay(x, 3.0 * np.exp(-1.7 * x), "exponential")
    assert f.rate_or_exponent == pytest.approx(1.7, rel=1e-2)
    assert f.r_squared > 0.999
    assert f.n_points == 200


def test_fit_decay_synthetic_power():
    x = np.linspace(2, 40, 200)
    f = fit_decay(x, -0.3 * x ** -2.0, "power")
    assert f.rate_or_exponent == pytest.approx(-2.0, rel=1e-2)
    with pytest.raises(ValueError):
        fit_decay(x, x, "gaussian")


def test_decay_fit_validation():
    with pytest.raises(ValueError):
        DecayFit((-1.0, 2.0), "power", -2.0, 1.0)
    with pytest.raises(ValueError):
        DecayFit((1.0, 2.0), "cubic", -2.0, 1.0)


def test_tail_on_synthetic_profile():
    params = AnisotropyParams(2.0)
    grid = Grid(30.0, 1201)
    phi = 4 * np.arctan(np.exp(grid.x))
    phi[0], phi[-1] = 0.0, 2 * math.pi
    p = make_profile(grid, params, phi, 0.0, 2 * math.pi)
    fit = fit_tail_decay(p, model="exponential", window=(0.1, 0.5))
    # 1 - cos(4 arctan e^{-x}) ~ 8 e^{-2x}
    assert fit.rate_or_exponent == pytest.approx(2.0, rel=1e-2)
    left = fit_tail_decay(p, model="exponential", window=(0.1, 0.5), side="left")
    assert left.rate_or_exponent == pytest.approx(2.0, rel=1e-2)
    with pytest.raises(ValueError):
        fit_tail_decay(p, side="up")


def test_h2_exponential_tail(h2_d1):
    rep, _ = h2_d1
    fit = fit_tail_decay(rep.profile, model="exponential")
    assert fit.r_squared >= 0.99


def test_h05_power_tails(small_wall, large_wall):
    for rep, _ in (small_wall, large_wall):
        fit = fit_tail_decay(rep.profile, model="power")
        assert abs(fit.rate_or_exponent + 2.0) <= 0.3


def test_lambda_bound_and_h2_tail(h2_d1, small_wall):
    for rep, plan in (h2_d1, small_wall):
        lb = pointwise_lambda_bound_check(rep.profile, plan=plan)
        assert lb.holds and lb.constant > 0
    rep, plan = h2_d1
    tails = [h2_tail_check(rep.profile, R=R, plan=plan) for R in (5.0, 10.0)]
    assert all(t.holds for t in tails)
    assert tails[1].integral < tails[0].integral


def test_symmetry_metrics(h2_d1, small_wall):
    for rep, _ in (h2_d1, small_wall):
        s = symmetry_metrics(rep.profile)
        assert s.even_defect_m1 <= 1e-3 and s.odd_defect_m2 <= 1e-3
        assert abs(s.center) < 0.5


def test_cubic_growth_small():
    rep = cubic_growth_study([math.cos(a) for a in (0.2, 0.3, 0.4, 0.5)], 20.0, 401)
    assert abs(rep.slope - 3.0) <= 0.3
    assert rep.bound_holds
    assert rep.large_ratio <= 2.0
    assert len(rep.to_dict()["rows"]) == 4
    with pytest.raises(ValueError):
        cubic_growth_study([0.5], 20.0, 401)
