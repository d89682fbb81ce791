"""Command-line entry point: ``neelwall <subcommand> ...``.

Exit status: 0 on success, 2 for usage errors, 1 for numerical failures (with a
JSON diagnostic on standard error).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

import numpy as np

from . import green, local_model, suites
from .halfline import (SpectralPlan, harmonic_extension_V, harmonic_extension_V_fourier,
                       lambda_fourier, lambda_pv)
from .minimizer import (MinimizeConfig, dichotomy_probe, minimize, parse_degree, scan,
                        scan_order, scan_to_csv, start_profile, wall_centers)
from .profile import (AnisotropyParams, Grid, ProfileError, grid_from_nodes, initial_guess,
                      read_csv, read_profile, write_csv, write_profile)


class UsageError(Exception):
    pass


class NumericalFailure(Exception):
    def __init__(self, message: str, **info):
        super().__init__(message)
        self.info = info


# ----------------------------------------------------------------- helpers

def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _labels(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def _params(h: float) -> AnisotropyParams:
    try:
        return AnisotropyParams(h)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _degree(text: str, params: AnisotropyParams) -> float:
    try:
        d = parse_degree(text, params)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    if not params.is_admissible_degree(d):
        raise UsageError(f"degree {text} is not admissible for h={params.h}")
    return d


def _jobs(args) -> int:
    if args.jobs is not None:
        return max(1, args.jobs)
    env = os.environ.get("NEELWALL_JOBS", "").strip()
    if not env:
        return 1
    try:
        return max(1, int(env))
    except ValueError as exc:
        raise UsageError(f"NEELWALL_JOBS must be an integer, got {env!r}") from exc


def _pmap(fn, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) <= 1:
        return [fn(*it) for it in items]
    with ProcessPoolExecutor(max_workers=min(jobs, len(items))) as ex:
        futs = [ex.submit(fn, *it) for it in items]
        return [f.result() for f in futs]


def _emit(text: str, path: str | None) -> None:
    if path and path != "-":
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config(args) -> MinimizeConfig:
    return MinimizeConfig(max_iters=args.max_iters, tol_residual=args.tol, seed=args.seed)


# ------------------------------------------------------------- subcommands

def cmd_minimize(args) -> int:
    params = _params(args.h)
    d = _degree(args.d, params)
    try:
        grid = Grid(args.L, args.N)
    except ProfileError as exc:
        raise UsageError(str(exc)) from exc
    if args.start:
        p0 = read_profile(args.start)
        if p0.grid != grid or p0.params != params or abs(p0.degree - d) > 1e-9:
            raise UsageError("start profile does not match --h/--d/--L/--N")
    elif args.init == "linear":
        p0 = initial_guess(grid, params, d, "linear_ramp")
    else:
        p0 = start_profile(grid, params, d)
    plan = SpectralPlan(grid, args.pad)
    rep = minimize(plan, params, p0, _config(args))
    if args.out:
        _emit(rep.to_json() + "\n", args.out)
    if args.profile_out:
        write_profile(rep.profile, args.profile_out)
    summary = {"h": params.h, "d": d, "L": grid.half_length, "N": grid.n_points,
               "energy": rep.energy.to_dict(), "residual_max": rep.residual_max,
               "iters": rep.iters, "newton_steps": rep.newton_steps,
               "converged": rep.converged,
               "wall_centers": [float(c) for c in wall_centers(rep.profile)]}
    sys.stdout.write(json.dumps(summary) + "\n")
    if not rep.converged:
        raise NumericalFailure("minimizer did not converge", residual_max=rep.residual_max,
                               iters=rep.iters)
    return 0


def _scan_chain(h_list, label, L, N, cfg, pad):
    return scan(h_list, [label], L, N, cfg, pad)


def cmd_scan(args) -> int:
    for h in args.h:
        _params(h)
    labels = _labels(args.d)
    if not labels:
        raise UsageError("--d needs at least one degree")
    cfg = _config(args)
    chains = _pmap(_scan_chain, [(args.h, lab, args.L, args.N, cfg, args.pad) for lab in labels],
                   _jobs(args))
    rows = [r for chain in chains for r in chain]
    h_rank = {h: i for i, (h, _) in enumerate(scan_order(args.h, [0.0]))}
    rows.sort(key=lambda r: (h_rank.get(r.h, len(h_rank)), math.inf if math.isnan(r.d) else r.d))
    _emit(scan_to_csv(rows), args.out)
    bad = [r for r in rows if r.error or not r.converged]
    if bad:
        raise NumericalFailure("some scan cells failed",
                               cells=[{"h": r.h, "d": r.d, "error": r.error} for r in bad])
    return 0


def _suite(name: str, seed: int):
    return name, [c.to_dict() for c in suites.run_suite(name, seed)]


def cmd_verify(args) -> int:
    names = sorted(suites.SUITES) if args.suite == "all" else [args.suite]
    results = dict(_pmap(_suite, [(n, args.seed) for n in names], _jobs(args)))
    passed = all(c["passed"] for checks in results.values() for c in checks)
    out = {"passed": passed,
           "suites": {n: {"passed": all(c["passed"] for c in cs), "checks": cs}
                      for n, cs in results.items()}}
    _emit(json.dumps(out, indent=2) + "\n", args.out)
    return 0 if passed else 1


def cmd_lambda(args) -> int:
    x, f, _ = read_csv(args.input)
    grid = grid_from_nodes(x)
    if args.route == "fourier":
        lf = lambda_fourier(SpectralPlan(grid, args.pad), f)
    else:
        lf = lambda_pv(f, grid)
    _write_csv_out(args.out, grid.x, lf, "lambda")
    return 0


def _write_csv_out(path, x, values, name):
    if path and path != "-":
        write_csv(path, x, values, name)
    else:
        sys.stdout.write(f"x,{name}\n")
        for a, b in zip(x, values):
            sys.stdout.write(f"{format(float(a), '.17g')},{format(float(b), '.17g')}\n")


def cmd_extension(args) -> int:
    x, f, _ = read_csv(args.input)
    grid = grid_from_nodes(x)
    levels = np.asarray(args.x2, dtype=float)
    if levels.size == 0 or np.any(levels <= 0) or np.any(np.diff(levels) <= 0):
        raise UsageError("--x2 must be positive and ascending")
    if args.route == "poisson":
        fld = harmonic_extension_V(f, grid, levels)
    else:
        fld = harmonic_extension_V_fourier(SpectralPlan(grid, args.pad), f, levels)
    lines = ["x1,x2,V"]
    for j, t in enumerate(fld.x2):
        for a, v in zip(fld.x1, fld.values[j]):
            lines.append(f"{format(float(a), '.17g')},{format(float(t), '.17g')},"
                         f"{format(float(v), '.17g')}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_greens(args) -> int:
    if not 0 < args.alpha <= math.pi / 2 + 1e-15:
        raise UsageError("--alpha must lie in (0, pi/2]")
    if any(x == 0 for x in args.x):
        raise UsageError("--x must be nonzero")
    vals = [green.green_eval(args.alpha, x)._asdict() for x in args.x]
    out = vals[0] if len(vals) == 1 else vals
    _emit(json.dumps(out) + "\n", args.out)
    return 0


def cmd_local(args) -> int:
    params = _params(args.h)
    if args.probe_degree is not None:
        d = _degree(args.probe_degree, params)
        rep = local_model.local_nonexistence_probe(params, d, n_slopes=args.slopes,
                                                    seed=args.seed if args.random else None)
        out = {"h": rep.h, "target_degree": rep.target_degree, "start_well": rep.start_well,
               "target_well": rep.target_well, "connections": rep.connections,
               "outcomes": rep.counts(), "max_drift": rep.max_drift}
        _emit(json.dumps(out) + "\n", args.out)
        return 0
    wall = local_model.local_heteroclinic(params, args.direction, args.kind,
                                          Grid(args.T, args.N))
    lines = ["t,phi,dphi"]
    for t, p, v in zip(wall.t, wall.phi, wall.dphi):
        lines.append(",".join(format(float(val), ".17g") for val in (t, p, v)))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_probe(args) -> int:
    params = _params(args.h)
    d = _degree(args.d, params)
    if len(args.L) < 2:
        raise UsageError("--L needs at least two domain sizes")
    rep = dichotomy_probe(params, d, args.L, _config(args), dx=args.dx, pad_factor=args.pad)
    _emit(json.dumps(rep.to_dict()) + "\n", args.out)
    return 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="neelwall",
                                 description="Neel wall energy minimization and diagnostics")
    ap.add_argument("--seed", type=int, default=42, help="seed for all randomness (default 42)")
    sub = ap.add_subparsers(dest="command", required=True)

    def solver_flags(p, L=30.0, N=2048):
        p.add_argument("--L", type=float, default=L, help="half-length of the domain")
        p.add_argument("--N", type=int, default=N, help="number of grid nodes")
        p.add_argument("--tol", type=float, default=1e-6, help="max-norm residual target")
        p.add_argument("--max-iters", type=int, default=20000)
        p.add_argument("--pad", type=int, default=4, help="FFT padding factor")

    p = sub.add_parser("minimize", help="minimize E_h in one winding class")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--d", required=True, help="degree, e.g. 1, 2, a/pi, 1-a/pi")
    solver_flags(p)
    p.add_argument("--init", choices=("stacked", "linear"), default="stacked")
    p.add_argument("--start", help="profile JSON to start from")
    p.add_argument("--out", help="write the full report (JSON)")
    p.add_argument("--profile-out", help="write the minimizer (profile JSON)")
    p.set_defaults(func=cmd_minimize)

    p = sub.add_parser("scan", help="table of minimal energies over (h, d)")
    p.add_argument("--h", type=_floats, required=True, help="comma-separated fields")
    p.add_argument("--d", required=True, help="comma-separated degrees")
    solver_flags(p)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--out", help="CSV path (default stdout)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify", help="run a suite of numerical checks")
    p.add_argument("--suite", choices=sorted(suites.SUITES) + ["all"], default="all")
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("lambda", help="apply Lambda to a CSV sample")
    p.add_argument("--input", required=True)
    p.add_argument("--route", choices=("fourier", "pv"), default="fourier")
    p.add_argument("--pad", type=int, default=4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_lambda)

    p = sub.add_parser("extension", help="harmonic extension V on a half-plane mesh")
    p.add_argument("--input", required=True)
    p.add_argument("--x2", type=_floats, required=True, help="comma-separated heights")
    p.add_argument("--route", choices=("poisson", "fourier"), default="poisson")
    p.add_argument("--pad", type=int, default=4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_extension)

    p = sub.add_parser("greens", help="fundamental solution G, G', G'' at x")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--x", type=_floats, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_greens)

    p = sub.add_parser("local", help="local Allen-Cahn model: heteroclinic or shooting probe")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--kind", choices=("small", "large"), default="small")
    p.add_argument("--direction", type=int, choices=(1, -1), default=1)
    p.add_argument("--T", type=float, default=40.0, help="half-length of the time window")
    p.add_argument("--N", type=int, default=8001)
    p.add_argument("--probe-degree", help="run the shooting probe toward this degree")
    p.add_argument("--slopes", type=int, default=200)
    p.add_argument("--random", action="store_true", help="draw slopes from the seed")
    p.add_argument("--out")
    p.set_defaults(func=cmd_local)

    p = sub.add_parser("probe", help="wall separation versus domain size")
    p.add_argument("--h", type=float, required=True)
    p.add_argument("--d", required=True)
    p.add_argument("--L", type=_floats, required=True, help="comma-separated half-lengths")
    p.add_argument("--dx", type=float, default=0.1)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--max-iters", type=int, default=20000)
    p.add_argument("--pad", type=int, default=4)
    p.add_argument("--out")
    p.set_defaults(func=cmd_probe)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        ap.print_usage(sys.stderr)
        sys.stderr.write(f"neelwall: error: {exc}\n")
        return 2
    except NumericalFailure as exc:
        sys.stderr.write(json.dumps({"error": "numerical_failure", "message": str(exc),
                                     **exc.info}) + "\n")
        return 1
    except BrokenPipeError:
        # downstream closed early (e.g. `| head`); silence the flush at exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except (ProfileError, OSError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1
    except (ArithmeticError, ValueError, RuntimeError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
