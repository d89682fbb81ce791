import math

import numpy as np
import pytest

from conftest import solved
from neelwall.halfline import SpectralPlan
from neelwall.minimizer import (MinimizeConfig, MinimizeReport, ScanRow, classify_separation,
                                expected_passage_count, minimize, parse_degree, passages,
                                scan, scan_order, scan_to_csv, start_profile, subadditivity,
                                symmetrize, wall_centers, wall_separation)
from neelwall.profile import AnisotropyParams, Grid


def test_config_validation():
    with pytest.raises(ValueError):
        MinimizeConfig(tol_residual=0)
    with pytest.raises(ValueError):
        MinimizeConfig(step_rule="magic")
    with pytest.raises(ValueError):
        MinimizeConfig(shrink=1.5)
    with pytest.raises(ValueError):
        MinimizeConfig(max_iters=-1)


def test_h2_d1_converges(h2_d1):
    rep, _ = h2_d1
    assert rep.converged and rep.residual_max <= 1e-8
    assert rep.profile.degree == pytest.approx(1.0, abs=1e-12)
    e = rep.energy
    assert abs(e.exchange - e.aniso) <= 1e-2 * e.total


def test_energy_trace_monotone(h2_d1):
    rep, _ = h2_d1
    tr = rep.energy_trace
    assert np.all(np.diff(tr) <= 1e-10 * np.abs(tr[:-1]))


def test_report_json_round_trip(h2_d1):
    rep, _ = h2_d1
    back = MinimizeReport.from_json(rep.to_json())
    assert back.energy == rep.energy
    assert np.array_equal(back.profile.phi, rep.profile.phi)
    assert back.converged == rep.converged


def test_degree_preserved_and_deterministic():
    params = AnisotropyParams(0.5)
    grid = Grid(15.0, 301)
    plan = SpectralPlan(grid)
    p0 = start_profile(grid, params, 1.0)
    cfg = MinimizeConfig(max_iters=50, newton=False)
    r1 = minimize(plan, params, p0, cfg)
    r2 = minimize(plan, params, p0, cfg)
    assert r1.profile.degree == p0.degree
    assert np.array_equal(r1.profile.phi, r2.profile.phi)
    assert r1.energy.total <= 1.0001 * r1.energy_trace[0]


def test_fixed_step_rule_descends():
    params = AnisotropyParams(2.0)
    grid = Grid(15.0, 301)
    plan = SpectralPlan(grid)
    cfg = MinimizeConfig(max_iters=30, step_rule="fixed", dt=0.05, newton=False)
    rep = minimize(plan, params, start_profile(grid, params, 1.0), cfg)
    assert np.all(np.diff(rep.energy_trace) <= 1e-12 * max(1.0, rep.energy_trace[0]))


def test_passage_counts(h2_d1, small_wall, large_wall):
    cases = [(h2_d1, 1.0), (small_wall, None), (large_wall, None)]
    for (rep, _), d in cases:
        d = rep.profile.degree if d is None else d
        assert len(passages(rep.profile)) == expected_passage_count(rep.profile.params, d)


def test_expected_passage_table():
    lo, hi = AnisotropyParams(0.5), AnisotropyParams(2.0)
    a = lo.alpha / math.pi
    assert expected_passage_count(hi, 1) == 1
    assert expected_passage_count(hi, 3) == 5
    assert expected_passage_count(lo, 1) == 2
    assert expected_passage_count(lo, a) == 1
    assert expected_passage_count(lo, 1 - a) == 1
    assert expected_passage_count(lo, 1 + a) == 3
    assert expected_passage_count(lo, 2 - a) == 3


def test_wall_centers_h2_d2():
    rep, _ = solved(2.0, "2", 30.0, 1201)
    c = wall_centers(rep.profile)
    assert len(c) == 2
    assert wall_separation(rep.profile) == pytest.approx(c[1] - c[0])
    assert abs(c[0] + c[1]) < 0.1


def test_parse_degree():
    p = AnisotropyParams(0.5)
    a = p.alpha / math.pi
    assert parse_degree("a/pi", p) == a
    assert parse_degree("1-a/pi", p) == pytest.approx(1 - a)
    assert parse_degree("2+alpha/pi", p) == pytest.approx(2 + a)
    assert parse_degree("-a/pi", p) == -a
    assert parse_degree("3", p) == 3.0
    with pytest.raises(ValueError):
        parse_degree("a/pi+1", p)
    with pytest.raises(ValueError):
        parse_degree("x", p)


def test_scan_order():
    order = scan_order([0.5, 2.0, 0.95], [2, 1])
    assert order[0] == (2.0, 1) and order[-1] == (0.95, 2)


def test_scan_and_csv():
    rows = scan([2.0], [1, 2, 0.5], 15.0, 301, MinimizeConfig(max_iters=3000))
    errs = [r for r in rows if r.error]
    assert len(errs) == 1  # half a turn is not admissible for h > 1
    good = [r for r in rows if not r.error]
    assert all(r.converged for r in good)
    text = scan_to_csv(rows)
    head = text.splitlines()[0].split(",")
    assert head[:11] == ["h", "d", "L", "N", "total", "exchange", "aniso", "stray",
                         "residual", "converged", "separation"]
    assert head[-2:] == ["strict_subadditive", "subadditivity_margin"]
    sub = subadditivity(rows)
    ok, margin = sub[(2.0, 2.0)]
    assert ok and margin > 0
    assert sub[(2.0, 1.0)][0] is None


def test_subadditivity_synthetic():
    rows = [ScanRow(2.0, 1.0, 10, 100, total=3.0, converged=True),
            ScanRow(2.0, 2.0, 10, 100, total=7.0, converged=True)]
    ok, m = subadditivity(rows)[(2.0, 2.0)]
    assert not ok and m == pytest.approx(-1.0)


def test_classify_separation():
    assert classify_separation([20, 40, 80], [10, 25, 60]) == "grows"
    assert classify_separation([20, 40, 80], [7.0, 7.2, 7.2]) == "saturates"
    assert classify_separation([20, 40, 80], [7.0, 10.0, 14.0]) == "inconclusive"
    with pytest.raises(ValueError):
        classify_separation([20], [1])


def test_symmetrize_keeps_energy_low(small_wall):
    rep, plan = small_wall
    from neelwall.energy import energy
    sym = symmetrize(rep.profile, plan)
    assert energy(plan, sym.params, sym).total <= rep.energy.total + 1e-6
    assert sym.degree == rep.profile.degree


def test_symmetrize_rejects_integer_degree_h_below_one():
    params = AnisotropyParams(0.5)
    grid = Grid(15.0, 301)
    with pytest.raises(ValueError):
        symmetrize(start_profile(grid, params, 1.0))


def test_minimize_rejects_mismatched_params():
    grid = Grid(15.0, 301)
    params = AnisotropyParams(2.0)
    p = start_profile(grid, params, 1.0)
    with pytest.raises(ValueError):
        minimize(SpectralPlan(grid), AnisotropyParams(3.0), p)
