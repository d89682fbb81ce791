"""Acceptance criteria AC1-AC11.

Each test records one ``ACn PASS|FAIL`` line (printed in the terminal summary by
``conftest.py``, or directly when this file is run as a script) and then asserts.
"""

import math
import time
from functools import lru_cache

import numpy as np
import pytest

from neelwall import suites
from neelwall.analysis import cubic_growth_study, fit_tail_decay, symmetry_metrics
from neelwall.constructions import split_parts
from neelwall.energy import energy
from neelwall.halfline import SpectralPlan
from neelwall.minimizer import (MinimizeConfig, dichotomy_probe, expected_passage_count,
                                minimize, parse_degree, passages, resample, start_profile)
from neelwall.profile import AnisotropyParams, Grid, initial_guess, wall_layout

pytestmark = pytest.mark.slow

RESULTS: dict[str, str] = {}


def record(tag: str, ok: bool, detail: str) -> None:
    line = f"{tag} {'PASS' if ok else 'FAIL'}: {detail}"
    RESULTS[tag] = line
    print(line)


def _checks_line(checks) -> str:
    return "; ".join(f"{c.name}={c.value:.3g} (<= {c.bound:.3g})" for c in checks)


# --------------------------------------------------------------- solvers

AC_N = 4096
FLAT_TOL = 1e-9  # the bound pair at h=0.95 sits in a very flat landscape


@lru_cache(maxsize=None)
def probe(h: float, label: str, Ls: tuple, dx: float, tol: float = FLAT_TOL):
    params = AnisotropyParams(h)
    d = parse_degree(label, params)
    return dichotomy_probe(params, d, list(Ls), MinimizeConfig(tol_residual=tol), dx=dx)


@lru_cache(maxsize=None)
def cell(h: float, label: str, L: float, N: int = AC_N, tol: float = 1e-7):
    """Converged minimizer on ``Grid(L, N)``.

    The bound h = 0.95 pair sits in a very flat landscape whose equilibrium
    separation moves with the grid spacing, so it is refined through
    dx = 0.2, 0.1, 0.05 before the final grid.
    """
    params = AnisotropyParams(h)
    d = parse_degree(label, params)
    grid = Grid(L, N)
    t0 = time.time()
    if h == 0.95 and label == "2-a/pi":
        p0 = None
        for dx in (0.2, 0.1, 0.05):
            g = Grid.from_spacing(L, dx)
            start = start_profile(g, params, d) if p0 is None else resample(p0, g)
            p0 = minimize(SpectralPlan(g), params, start,
                          MinimizeConfig(tol_residual=FLAT_TOL)).profile
        p0 = resample(p0, grid)
    else:
        p0 = start_profile(grid, params, d)
    plan = SpectralPlan(grid)
    rep = minimize(plan, params, p0, MinimizeConfig(tol_residual=tol))
    return rep, plan, time.time() - t0


ATTAINED = [(2.0, "1", 30.0), (2.0, "2", 30.0), (2.0, "3", 30.0),
            (0.5, "a/pi", 80.0), (0.5, "1-a/pi", 80.0),
            (0.95, "a/pi", 80.0), (0.95, "1-a/pi", 80.0), (0.95, "2-a/pi", 80.0)]


# ------------------------------------------------------------------ AC1-3

def test_ac1_operators():
    t0 = time.time()
    checks = suites.operators_suite(42)
    wanted = [c for c in checks if c.name in ("lambda_fourier_vs_pv", "gaussian_seminorm",
                                                "lorentzian_seminorm")]
    dt = time.time() - t0
    ok = all(c.passed for c in wanted) and dt <= 60
    record("AC1", ok, f"{_checks_line(wanted)}; {dt:.1f}s")
    assert ok


def test_ac2_stray_identity():
    t0 = time.time()
    checks = suites.stray_suite(42)
    pde = [c for c in checks if c.name == "spectral_vs_pde_relative"]
    dt = time.time() - t0
    ok = all(c.passed for c in pde) and dt <= 300
    record("AC2", ok, f"{_checks_line(pde)}; {dt:.1f}s")
    assert ok


def test_ac3_interaction():
    t0 = time.time()
    checks = suites.interaction_suite(42)
    dt = time.time() - t0
    ok = all(c.passed for c in checks) and dt <= 60
    record("AC3", ok, f"{_checks_line(checks)}; {dt:.1f}s")
    assert ok


# --------------------------------------------------------------------- AC4

def test_ac4_equipartition():
    worst, slowest, ok = 0.0, 0.0, True
    for h, label, L in ATTAINED:
        rep, _, dt = cell(h, label, L)
        e = rep.energy
        ratio = abs(e.exchange - e.aniso) / e.total
        good = rep.converged and ratio <= 1e-2 and dt <= 600
        ok &= good
        worst = max(worst, ratio)
        slowest = max(slowest, dt)
    record("AC4", ok, f"max |int phi'^2 - 2 int W| / E = {2 * worst:.2e} (<= 2e-2) over "
                      f"{len(ATTAINED)} cells at N={AC_N}; slowest {slowest:.0f}s")
    assert ok


# --------------------------------------------------------------------- AC5

def test_ac5_decay():
    rep, _, _ = cell(2.0, "1", 30.0)
    exp_fit = fit_tail_decay(rep.profile, model="exponential")
    powers = []
    for label in ("a/pi", "1-a/pi"):
        r, _, _ = cell(0.5, label, 80.0)
        powers.append(fit_tail_decay(r.profile, model="power").rate_or_exponent)
    ok = exp_fit.r_squared >= 0.99 and all(abs(p + 2.0) <= 0.3 for p in powers)
    record("AC5", ok, f"h=2 d=1 exponential r2={exp_fit.r_squared:.5f} "
                      f"(rate {exp_fit.rate_or_exponent:.3f}); h=0.5 power exponents "
                      f"{powers[0]:.3f}, {powers[1]:.3f}")
    assert ok


# --------------------------------------------------------------------- AC6

def test_ac6_cubic_growth():
    rep = cubic_growth_study([math.cos(a) for a in (0.1, 0.2, 0.3, 0.4, 0.5)], 20.0, 401)
    ok = abs(rep.slope - 3.0) <= 0.3 and rep.large_ratio <= 2.0 and all(
        r.converged for r in rep.rows)
    record("AC6", ok, f"slope {rep.slope:.4f} (r2 {rep.r_squared:.6f}); large-wall "
                      f"max/min {rep.large_ratio:.3f}")
    assert ok


# --------------------------------------------------------------------- AC7

def test_ac7_h2_subadditivity_and_saturation():
    e = {d: cell(2.0, d, 30.0)[0].energy.total for d in ("1", "2", "3")}
    m11 = 2 * e["1"] - e["2"]
    m12 = e["1"] + e["2"] - e["3"]
    pr = probe(2.0, "2", (20.0, 40.0, 80.0), 0.1)
    ok = m11 >= 1e-4 and m12 >= 1e-4 and pr.signature == "saturates" and all(pr.converged)
    seps = ", ".join(f"{s:.2f}" for s in pr.separation)
    record("AC7a", ok, f"h=2 margins (1,1) {m11:.4f}, (1,2) {m12:.4f}; d=2 separation "
                       f"{seps} at L=20,40,80 -> {pr.signature}")
    assert ok


def test_ac7_h05_dichotomy():
    Ls, dx = (20.0, 40.0, 80.0), 0.2
    one = probe(0.5, "1", Ls, dx)
    small = probe(0.5, "a/pi", Ls, dx)
    large = probe(0.5, "1-a/pi", Ls, dx)
    gaps = [e1 - es - el for e1, es, el in zip(one.energy, small.energy, large.energy)]
    rel = [g / (es + el) for g, es, el in zip(gaps, small.energy, large.energy)]
    shrinking = all(abs(b) < abs(a) for a, b in zip(gaps, gaps[1:]))
    ok = (all(r >= -0.05 for r in rel) and shrinking and one.signature == "grows"
          and all(one.converged + small.converged + large.converged))
    record("AC7b", ok, "h=0.5 gap E(1)-E(a/pi)-E(1-a/pi) = "
                       + ", ".join(f"{g:.5f}" for g in gaps)
                       + " at L=20,40,80; separation "
                       + ", ".join(f"{s:.1f}" for s in one.separation)
                       + f" -> {one.signature}")
    assert ok


def test_ac7_h095_saturation():
    pr = probe(0.95, "2-a/pi", (80.0, 160.0, 320.0), 0.2)
    ok = pr.signature == "saturates" and all(pr.converged)
    record("AC7c", ok, "h=0.95 d=2-a/pi separation "
                       + ", ".join(f"{s:.2f}" for s in pr.separation)
                       + f" at L=80,160,320 -> {pr.signature}")
    assert ok


# --------------------------------------------------------------------- AC8

def test_ac8_split_comparison():
    rng = np.random.default_rng(42)
    params = AnisotropyParams(0.5)
    grid = Grid(20.0, 801)
    plan = SpectralPlan(grid)
    n_walls = len(wall_layout(params, 1.0)[1])
    margins = []
    for _ in range(10):
        centers = np.sort(rng.uniform(-8.0, 8.0, n_walls))
        p = initial_guess(grid, params, 1.0, "stacked_walls", centers=centers,
                          widths=float(rng.uniform(0.5, 2.5)))
        bump = np.zeros(grid.n_points)
        bump[1:-1] = 0.3 * rng.standard_normal() * np.exp(-(grid.x[1:-1] - rng.uniform(-5, 5)) ** 2)
        p = p.with_phi(p.phi + bump)
        plus, minus = split_parts(p)
        margins.append(energy(plan, params, p).total - energy(plan, params, plus).total
                       - energy(plan, params, minus).total)
    ok = min(margins) >= 1e-6
    record("AC8", ok, f"min E(p)-E(p+)-E(p-) over 10 profiles = {min(margins):.4f} (>= 1e-6)")
    assert ok


# --------------------------------------------------------------------- AC9

def test_ac9_symmetry_and_passages():
    worst, ok, bad = 0.0, True, []
    for h, label, L in ATTAINED:
        rep, _, _ = cell(h, label, L)
        p = rep.profile
        s = symmetry_metrics(p)
        n = len(passages(p))
        want = expected_passage_count(p.params, p.degree)
        worst = max(worst, s.even_defect_m1, s.odd_defect_m2)
        if n != want:
            bad.append(f"h={h} d={label}: {n} != {want}")
        ok &= rep.converged and s.even_defect_m1 <= 1e-3 and s.odd_defect_m2 <= 1e-3 and n == want
    record("AC9", ok, f"max symmetry defect {worst:.1e} (<= 1e-3) over {len(ATTAINED)} "
                      f"minimizers; passage counts {'all match' if not bad else bad}")
    assert ok


# ------------------------------------------------------------------ AC10-11

def test_ac10_green():
    checks = suites.green_suite(42)
    ok = all(c.passed for c in checks)
    record("AC10", ok, _checks_line(checks))
    assert ok


def test_ac11_local_model():
    checks = suites.local_suite(42, n_slopes=200)
    ok = all(c.passed for c in checks)
    record("AC11", ok, _checks_line(checks))
    assert ok


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q", "-s"]))
