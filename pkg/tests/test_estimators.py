import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from neelwall.estimators import (LambdaTransformer, TailDecayRegressor, WallMinimizer,
                                 profile_from_phase)
from neelwall.profile import AnisotropyParams, Grid


def test_wall_minimizer_params_and_clone():
    est = WallMinimizer(h=2.0, d="1", L=15.0, N=301)
    assert est.get_params()["N"] == 301
    c = clone(est).set_params(N=401)
    assert c.N == 401 and est.N == 301
    with pytest.raises(NotFittedError):
        est.predict([0.0])


def test_wall_minimizer_fit_predict():
    est = WallMinimizer(h=2.0, d="1", L=15.0, N=301).fit()
    assert est.converged_
    assert est.degree_ == 1.0
    phi = est.predict([-100.0, 0.0, 100.0])
    assert phi[0] == 0.0 and phi[-1] == pytest.approx(2 * np.pi)
    m = est.transform(np.linspace(-5, 5, 11))
    assert m.shape == (11, 2)
    assert np.allclose(np.hypot(m[:, 0], m[:, 1]), 1.0)
    assert est.score() == -est.energy_.total
    assert len(est.wall_centers_) == 1


def test_lambda_transformer_routes_agree():
    grid = Grid(40.0, 1024)
    X = np.vstack([np.exp(-grid.x ** 2), np.exp(-(grid.x - 1) ** 2 / 2)])
    a = LambdaTransformer(L=40.0).fit_transform(X)
    b = LambdaTransformer(L=40.0, route="pv").fit_transform(X)
    assert a.shape == X.shape
    assert np.max(np.abs(a - b)) < 1e-3
    with pytest.raises(ValueError):
        LambdaTransformer(route="x").fit(X)
    with pytest.raises(ValueError):
        LambdaTransformer(L=40.0).fit(X).transform(X[:, :10])


def test_tail_regressor():
    x = np.linspace(1, 10, 50)
    reg = TailDecayRegressor().fit(x[:, None], 2 * np.exp(-0.5 * x))
    assert reg.rate_ == pytest.approx(0.5)
    assert reg.predict([2.0])[0] == pytest.approx(2 * np.exp(-1.0))
    assert reg.score(x[:, None], 2 * np.exp(-0.5 * x)) > 0.999
    pw = TailDecayRegressor(model="power").fit(x, x ** -2.0)
    assert pw.rate_ == pytest.approx(-2.0)


def test_profile_from_phase():
    params = AnisotropyParams(0.5)
    grid = Grid(10.0, 101)
    a = params.alpha
    phi = np.linspace(-a + 1e-3, a - 1e-3, 101)
    phi[0], phi[-1] = -a, a
    p = profile_from_phase(grid, params, phi)
    assert p.ell_minus == pytest.approx(-a) and p.ell_plus == pytest.approx(a)
