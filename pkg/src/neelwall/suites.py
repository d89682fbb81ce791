"""Named groups of numerical checks run by ``neelwall verify``.

Every check returns a :class:`Check`; a suite passes when all of its checks do.
The random corpora are drawn from one seed.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import green, local_model
from .constructions import conjugate, reflect
from .energy import energy, energy_and_residual
from .halfline import (PoorDecayWarning, SpectralPlan, gagliardo_inner, h_half_inner,
                       h_half_norm_sq, lambda_fourier, lambda_pv, smooth_corpus,
                       stray_energy_pde)
from .minimizer import (MinimizeConfig, expected_passage_count, minimize, passages,
                        start_profile)
from .profile import AnisotropyParams, Grid


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: float
    bound: float
    detail: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def _le(name: str, value: float, bound: float, detail: str = "") -> Check:
    return Check(name, bool(value <= bound), float(value), float(bound), detail)


def _bump(x: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Smooth bump supported in ``[lo, hi]``."""
    t = (2 * x - (lo + hi)) / (hi - lo)
    out = np.zeros_like(x)
    inside = np.abs(t) < 1
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - t[inside] ** 2))
    return out


# ---------------------------------------------------------------- suites

def operators_suite(seed: int = 42) -> list[Check]:
    grid = Grid(40.0, 4096)
    plan = SpectralPlan(grid)
    x = grid.x
    corpus = smooth_corpus(grid, 20, seed)
    inner = slice(grid.n_points // 6, grid.n_points - grid.n_points // 6)
    diff = max(float(np.max(np.abs(lambda_fourier(plan, f) - lambda_pv(f, grid))[inner]))
               for f in corpus)
    gauss = h_half_norm_sq(plan, np.exp(-x ** 2))
    lor_grid = Grid(80.0, 8192)
    lor = 1.0 / (1.0 + lor_grid.x ** 2)
    lor_plan = SpectralPlan(lor_grid)
    with warnings.catch_warnings():
        # the 1/x^2 tail is cut at |x| = L on purpose
        warnings.simplefilter("ignore", PoorDecayWarning)
        lor_norm = h_half_norm_sq(lor_plan, lor)
        lor_0 = float(lambda_fourier(lor_plan, lor)[lor_grid.n_points // 2])
    f, g = corpus[0], corpus[1]
    duality = abs(-grid.dx * float(np.dot(lambda_fourier(plan, f), g)) - h_half_inner(plan, f, g))
    return [
        _le("lambda_fourier_vs_pv", diff, 1e-3, "max-norm on the interior two-thirds, 20 profiles"),
        _le("gaussian_seminorm", abs(gauss - 1.0), 1e-6),
        _le("lorentzian_seminorm", abs(lor_norm - math.pi / 4), 1e-3),
        _le("lorentzian_lambda_at_0", abs(lor_0 + 1.0), 2e-3),
        _le("duality", duality, 1e-3),
    ]


def stray_suite(seed: int = 42, n: int = 20) -> list[Check]:
    grid = Grid(40.0, 1024)
    plan = SpectralPlan(grid)
    worst_pde, worst_gag = 0.0, 0.0
    for f in smooth_corpus(grid, n, seed):
        s = h_half_norm_sq(plan, f)
        worst_pde = max(worst_pde, abs(stray_energy_pde(f, grid, 40.0, 201) - s) / s)
        worst_gag = max(worst_gag, abs(gagliardo_inner(f, f, grid) - s))
    return [_le("spectral_vs_pde_relative", worst_pde, 0.10),
            _le("spectral_vs_gagliardo", worst_gag, 1e-3)]


def interaction_suite(seed: int = 42) -> list[Check]:
    rng = np.random.default_rng(seed)
    grid = Grid(60.0, 6001)
    plan = SpectralPlan(grid)
    x = grid.x
    checks = []
    worst, strict = -math.inf, True
    for f in smooth_corpus(grid, 50, seed):
        if not (np.any(f > 0) and np.any(f < 0)):
            continue
        fp, fm = np.maximum(f, 0), np.minimum(f, 0)
        gap = h_half_norm_sq(plan, fp) + h_half_norm_sq(plan, fm) - h_half_norm_sq(plan, f)
        worst = max(worst, gap)
        strict &= gap < 0
    checks.append(_le("repulsion", worst, 1e-6, "max of |f+|^2 + |f-|^2 - |f|^2"))
    checks.append(Check("repulsion_strict", bool(strict), float(worst), 0.0))
    ratio = 0.0
    for R in (5.0, 10.0, 20.0):
        for _ in range(10):
            a = rng.uniform(-5, 5)
            f = _bump(x, a - R - rng.uniform(3, 15), a - R) * rng.uniform(-1, 1)
            g = _bump(x, a + R, a + R + rng.uniform(3, 15)) * rng.uniform(-1, 1)
            l2 = math.sqrt(grid.dx * f @ f) * math.sqrt(grid.dx * g @ g)
            bound = l2 / (2 * math.pi * R * math.sqrt(6))
            ratio = max(ratio, abs(h_half_inner(plan, f, g)) / bound)
    checks.append(_le("separated_supports", ratio, 1.0 + 1e-6, "max |<f,g>| / bound"))
    viol = 0
    for R in (1.0, 2.0, 4.0):
        f = _bump(x, -2 * R, -R)
        g = _bump(x, R, 2 * R) * 2.0
        l1 = grid.dx * f.sum() * grid.dx * g.sum()
        ip = h_half_inner(plan, f, g)
        lo, hi = -l1 / (4 * math.pi * R ** 2), -l1 / (16 * math.pi * R ** 2)
        viol += not (lo - 1e-6 <= ip <= hi + 1e-6)
    checks.append(_le("attraction_violations", viol, 0))
    return checks


def energy_suite(seed: int = 42) -> list[Check]:
    rng = np.random.default_rng(seed)
    params = AnisotropyParams(0.5)
    grid = Grid(20.0, 801)
    plan = SpectralPlan(grid)
    p = start_profile(grid, params, 1.0)
    e = energy(plan, params, p)
    sym = max(abs(energy(plan, params, reflect(p)).total - e.total),
              abs(energy(plan, params, conjugate(p)).total - e.total))
    v = np.zeros(grid.n_points)
    v[1:-1] = rng.standard_normal(grid.n_points - 2) * np.exp(-grid.x[1:-1] ** 2 / 20)
    E0, r = energy_and_residual(plan, params, p.phi, grid.dx)
    eps = 1e-6
    Ep, _ = energy_and_residual(plan, params, p.phi + eps * v, grid.dx)
    Em, _ = energy_and_residual(plan, params, p.phi - eps * v, grid.dx)
    fd = (Ep - Em) / (2 * eps)
    an = grid.dx * float(r @ v)
    return [_le("reflect_conjugate_invariance", sym, 1e-12),
            _le("gradient_consistency", abs(fd - an) / max(abs(an), 1e-12), 1e-6)]


def minimizer_suite(seed: int = 42) -> list[Check]:
    params = AnisotropyParams(2.0)
    grid = Grid(30.0, 1201)
    plan = SpectralPlan(grid)
    rep = minimize(plan, params, start_profile(grid, params, 1.0), MinimizeConfig(seed=seed))
    e = rep.energy
    n_pass = len(passages(rep.profile))
    return [
        _le("h2_d1_residual", rep.residual_max, 1e-6),
        _le("h2_d1_equipartition", abs(e.exchange - e.aniso) / e.total, 1e-2),
        Check("h2_d1_passages", n_pass == expected_passage_count(params, 1.0), n_pass,
              expected_passage_count(params, 1.0)),
    ]


def green_suite(seed: int = 42) -> list[Check]:
    xis = [0.0, 0.5, 1.0, 2.5, 5.0]
    res = max(float(np.max(green.multiplier_identity_residual(a, xis)))
              for a in (0.3, math.pi / 2))
    g0 = abs(green.green_at_zero(math.pi / 2) - green.green_at_zero_closed_form_half_pi())
    xs = np.concatenate([-np.geomspace(1e-2, 30, 12), np.geomspace(1e-2, 30, 12)])
    env = all(green.envelopes_hold(a, xs) for a in (0.05, 0.3, math.pi / 4, math.pi / 2))
    h1 = max(green.h1_norm(a) for a in (0.05, 0.3, math.pi / 4, math.pi / 2))
    return [_le("multiplier_identity", res, 1e-6),
            _le("g_at_zero_half_pi", g0, 1e-6),
            Check("envelopes", env, float(env), 1.0),
            _le("h1_norm", h1, green.C_H1)]


def local_suite(seed: int = 42, n_slopes: int = 200) -> list[Check]:
    wall = local_model.local_heteroclinic(AnisotropyParams(0.0))
    gud = abs(wall.exchange_integral() - 2.0)
    conn, drift = 0, 0.0
    for h, d in ((2.0, 2.0), (0.5, 1.0)):
        rep = local_model.local_nonexistence_probe(AnisotropyParams(h), d, n_slopes=n_slopes)
        conn += rep.connections
        drift = max(drift, rep.max_drift)
    return [_le("gudermannian_energy", gud, 1e-4),
            _le("inadmissible_connections", conn, 0),
            _le("first_integral_drift", drift, 1e-8)]


SUITES: dict[str, Callable[..., list[Check]]] = {
    "operators": operators_suite,
    "stray": stray_suite,
    "interaction": interaction_suite,
    "energy": energy_suite,
    "minimizer": minimizer_suite,
    "green": green_suite,
    "local": local_suite,
}


def run_suite(name: str, seed: int = 42) -> list[Check]:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](seed=seed)
