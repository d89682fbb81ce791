"""scikit-learn style wrappers around the solver and the operators.

Hyperparameters live in ``__init__`` (so ``get_params``/``set_params`` and
``clone`` work); fitted state ends with an underscore.
"""

from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .analysis import fit_decay
from .halfline import SpectralPlan, lambda_fourier, lambda_pv
from .minimizer import MinimizeConfig, minimize, parse_degree, start_profile, wall_centers
from .profile import AnisotropyParams, Grid, make_profile


class WallMinimizer(BaseEstimator):
    """Minimizer of ``E_h`` in the class of degree ``d`` on ``[-L, L]``.

    ``fit()`` ignores its arguments (the problem is fully specified by the
    hyperparameters); ``predict(x)`` returns the minimizing phase at ``x`` and
    ``transform(x)`` the magnetization ``(m1, m2)``.
    """

    def __init__(self, h=2.0, d="1", L=30.0, N=2048, tol=1e-6, max_iters=20000,
                 pad_factor=4, newton=True, seed=42):
        self.h = h
        self.d = d
        self.L = L
        self.N = N
        self.tol = tol
        self.max_iters = max_iters
        self.pad_factor = pad_factor
        self.newton = newton
        self.seed = seed

    def fit(self, X=None, y=None):
        params = AnisotropyParams(self.h)
        d = parse_degree(str(self.d), params) if isinstance(self.d, str) else float(self.d)
        grid = Grid(self.L, self.N)
        plan = SpectralPlan(grid, pad_factor=self.pad_factor)
        cfg = MinimizeConfig(max_iters=self.max_iters, tol_residual=self.tol,
                             newton=self.newton, seed=self.seed)
        rep = minimize(plan, params, start_profile(grid, params, d), cfg)
        self.report_ = rep
        self.profile_ = rep.profile
        self.energy_ = rep.energy
        self.degree_ = d
        self.converged_ = rep.converged
        self.wall_centers_ = wall_centers(rep.profile)
        return self

    def predict(self, X):
        check_is_fitted(self, "profile_")
        x = np.asarray(X, dtype=float).ravel()
        p = self.profile_
        return np.interp(x, p.x, p.phi, left=p.ell_minus, right=p.ell_plus)

    def transform(self, X):
        phi = self.predict(X)
        return np.column_stack([np.cos(phi), np.sin(phi)])

    def score(self, X=None, y=None):
        """Negative total energy (larger is better)."""
        check_is_fitted(self, "energy_")
        return -self.energy_.total


class LambdaTransformer(TransformerMixin, BaseEstimator):
    """Applies ``Lambda`` row-wise to samples of functions on a common grid.

    ``X`` has shape ``(n_samples, n_points)``; the grid is ``[-L, L]`` with
    ``n_points`` nodes, fixed at ``fit``.
    """

    def __init__(self, L=40.0, route="fourier", pad_factor=4):
        self.L = L
        self.route = route
        self.pad_factor = pad_factor

    def fit(self, X, y=None):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.route not in ("fourier", "pv"):
            raise ValueError(f"unknown route {self.route!r}")
        self.grid_ = Grid(self.L, X.shape[1])
        self.plan_ = SpectralPlan(self.grid_, pad_factor=self.pad_factor)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "grid_")
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} features, got {X.shape[1]}")
        if self.route == "fourier":
            return lambda_fourier(self.plan_, X)
        return np.vstack([lambda_pv(row, self.grid_) for row in X])


class TailDecayRegressor(RegressorMixin, BaseEstimator):
    """Log-linear fit of ``|y|`` against ``x`` (``exponential``) or ``log x`` (``power``)."""

    def __init__(self, model="exponential"):
        self.model = model

    def fit(self, X, y):
        x = np.asarray(X, dtype=float).ravel()
        fit = fit_decay(x, y, self.model)
        self.fit_ = fit
        self.rate_ = fit.rate_or_exponent
        self.intercept_ = fit.intercept
        self.r_squared_ = fit.r_squared
        return self

    def predict(self, X):
        check_is_fitted(self, "fit_")
        x = np.asarray(X, dtype=float).ravel()
        if self.model == "exponential":
            return np.exp(self.intercept_ - self.rate_ * x)
        return np.exp(self.intercept_) * x ** self.rate_


def profile_from_phase(grid: Grid, params: AnisotropyParams, phi) -> "object":
    """Profile whose limits are the nearest well phases to the end samples."""
    phi = np.asarray(phi, dtype=float)
    wells = params.well_phases(min(phi[0], phi[-1]) - 2 * math.pi,
                               max(phi[0], phi[-1]) + 2 * math.pi)
    lo = float(wells[np.argmin(np.abs(wells - phi[0]))])
    hi = float(wells[np.argmin(np.abs(wells - phi[-1]))])
    return make_profile(grid, params, phi, lo, hi)
