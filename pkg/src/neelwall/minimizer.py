"""Energy minimization in a fixed winding class, symmetrization, parameter scans
and the wall-separation probe.

The end values of the phase are pinned, so every iterate keeps the degree of the
starting profile.  Descent uses the Sobolev gradient ``(I - D2)^{-1} r`` (applied
with a sine transform) and Barzilai-Borwein steps safeguarded by Armijo
backtracking; an optional dense Newton polish finishes the solve when the
descent stalls.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
from dataclasses import asdict, dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import fft as sfft
from scipy.interpolate import CubicSpline
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.signal import find_peaks

from .energy import (EnergyBreakdown, energy, energy_and_residual, hessian_diagonal_part)
from .halfline import SpectralPlan
from .profile import (AnisotropyParams, Grid, Profile, ProfileError, initial_guess,
                      make_profile, profile_from_json, profile_to_json, remap_phase,
                      resample, split_degree, wall_layout)

log = logging.getLogger(__name__)

STEP_RULES = ("backtracking", "fixed")
PRECONDITIONERS = ("sobolev", "none")
ACCEPT_SLACK = 1e-12


@dataclass(frozen=True)
class MinimizeConfig:
    max_iters: int = 20000
    tol_residual: float = 1e-6
    step_rule: str = "backtracking"
    dt: float = 0.1
    armijo_c: float = 1e-4
    shrink: float = 0.5
    preconditioner: str = "sobolev"
    symmetrize_every: int = 0
    seed: int = 42
    newton: bool = True
    newton_max_points: int = 6144
    newton_after: int = 200
    newton_switch: float = 1e-3
    newton_step_cap: float = 0.5

    def __post_init__(self):
        if not self.tol_residual > 0:
            raise ValueError("tol_residual must be positive")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.step_rule not in STEP_RULES:
            raise ValueError(f"step_rule must be one of {STEP_RULES}")
        if self.preconditioner not in PRECONDITIONERS:
            raise ValueError(f"preconditioner must be one of {PRECONDITIONERS}")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1)")
        if self.max_iters < 0:
            raise ValueError("max_iters must be nonnegative")


@dataclass(frozen=True, eq=False)
class MinimizeReport:
    profile: Profile
    energy: EnergyBreakdown
    residual_max: float
    iters: int
    energy_trace: np.ndarray
    converged: bool
    newton_steps: int = 0

    def to_dict(self) -> dict:
        return {
            "energy": self.energy.to_dict(),
            "residual_max": self.residual_max,
            "iters": self.iters,
            "newton_steps": self.newton_steps,
            "converged": self.converged,
            "degree": self.profile.degree,
            "energy_trace": [float(v) for v in self.energy_trace],
            "profile": json.loads(profile_to_json(self.profile)),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "MinimizeReport":
        d = json.loads(text)
        p = profile_from_json(json.dumps(d["profile"]))
        e = d["energy"]
        return cls(p, EnergyBreakdown(e["exchange"], e["aniso"], e["stray"], e["total"]),
                   float(d["residual_max"]), int(d["iters"]), np.asarray(d["energy_trace"]),
                   bool(d["converged"]), int(d.get("newton_steps", 0)))


class SobolevPreconditioner:
    """``(I - D2)^{-1}`` with homogeneous Dirichlet ends, via DST-I."""

    def __init__(self, n_points: int, dx: float):
        n = n_points - 2
        k = np.arange(1, n + 1)
        self.symbol = 1.0 + (2.0 - 2.0 * np.cos(math.pi * k / (n + 1))) / dx ** 2

    def __call__(self, r: np.ndarray) -> np.ndarray:
        out = np.zeros_like(r)
        out[1:-1] = sfft.idst(sfft.dst(r[1:-1], type=1) / self.symbol, type=1)
        return out


def _identity(r: np.ndarray) -> np.ndarray:
    return r


def _hessian_matrix(plan: SpectralPlan, params: AnisotropyParams, phi: np.ndarray,
                    dx: float) -> np.ndarray:
    """Dense second variation (per unit length) on the interior nodes."""
    a, s = hessian_diagonal_part(plan, params, phi)
    lam = plan.matrix()[1:-1, 1:-1]
    si = s[1:-1]
    J = -(si[:, None] * lam * si[None, :])
    idx = np.arange(len(si))
    J[idx, idx] += a[1:-1] + 2.0 / dx ** 2
    J[idx[:-1], idx[:-1] + 1] -= 1.0 / dx ** 2
    J[idx[1:], idx[1:] - 1] -= 1.0 / dx ** 2
    return J


def _newton_direction(J: np.ndarray, r: np.ndarray) -> tuple[np.ndarray, float]:
    """``-(J + mu I)^{-1} r`` with the smallest ``mu`` (from a geometric ladder) that
    makes the shifted matrix positive definite."""
    n = J.shape[0]
    scale = max(1.0, float(np.max(np.abs(np.diag(J)))))
    mu = 0.0
    idx = np.arange(n)
    while True:
        A = J.copy()
        A[idx, idx] += mu
        try:
            c = cho_factor(A, lower=True, check_finite=False)
            step = np.zeros(n + 2)
            step[1:-1] = -cho_solve(c, r[1:-1], check_finite=False)
            return step, mu
        except LinAlgError:
            mu = 1e-10 * scale if mu == 0.0 else 10.0 * mu
            if mu > 1e3 * scale:
                raise


def _accept(E: float, E_t: float, slope: float, t: float, c: float, rmax: float,
            rmax_t: float) -> bool:
    if E_t <= E + c * t * slope:
        return True
    # below round-off, accept steps that do not raise the energy and shrink the residual
    return E_t <= E + ACCEPT_SLACK * max(1.0, abs(E)) and rmax_t < rmax


def minimize(plan: SpectralPlan, params: AnisotropyParams, p0: Profile,
             cfg: MinimizeConfig | None = None) -> MinimizeReport:
    """Minimize ``E_h`` over profiles with the boundary values of ``p0``.

    Phase 1 is preconditioned descent.  Once it stalls (no 10% residual gain within
    ``newton_after`` steps) or reaches ``newton_switch``, and the grid is small
    enough for dense algebra, phase 2 runs Newton steps on the Hessian shifted to be
    positive definite, with Armijo backtracking and a max-norm step cap.  Every
    accepted step lowers the energy (up to round-off).
    """
    cfg = cfg or MinimizeConfig()
    plan.check_grid(p0.grid)
    if params != p0.params:
        raise ValueError("params do not match the profile")
    dx = p0.grid.dx
    precond = SobolevPreconditioner(p0.grid.n_points, dx) \
        if cfg.preconditioner == "sobolev" else _identity

    phi = np.array(p0.phi, dtype=float)
    E, r = energy_and_residual(plan, params, phi, dx)
    if not math.isfinite(E):
        raise FloatingPointError("non-finite energy at the starting profile")
    trace = [E]
    rmax = float(np.max(np.abs(r)))
    tau = cfg.dt
    it = 0
    newton_steps = 0
    stall = 0
    best_rmax = rmax
    newton_ok = cfg.newton and p0.grid.n_points <= cfg.newton_max_points
    phase = "descent"

    while rmax > cfg.tol_residual and it < cfg.max_iters:
        it += 1
        if phase == "newton":
            J = _hessian_matrix(plan, params, phi, dx)
            try:
                step, _mu = _newton_direction(J, r)
            except LinAlgError:
                phase, stall, best_rmax = "descent", 0, rmax
                newton_ok = False
                continue
            big = float(np.max(np.abs(step)))
            t = min(1.0, cfg.newton_step_cap / big) if big > 0 else 1.0
            slope = dx * float(np.dot(r, step))
            accepted = False
            for _ in range(40):
                trial = phi + t * step
                E_t, r_t = energy_and_residual(plan, params, trial, dx)
                if math.isfinite(E_t) and _accept(E, E_t, slope, t, cfg.armijo_c, rmax,
                                                  float(np.max(np.abs(r_t)))):
                    accepted = True
                    break
                t *= 0.5
            if not accepted:
                phase, stall, best_rmax = "descent", 0, rmax
                newton_ok = False
                continue
            newton_steps += 1
            phi, E, r = trial, E_t, r_t
            rmax = float(np.max(np.abs(r)))
            trace.append(E)
            continue

        pg = precond(r)
        slope = -dx * float(np.dot(r, pg))
        if slope >= 0:
            break
        t = cfg.dt if cfg.step_rule == "fixed" else tau
        accepted = False
        for _ in range(60):
            trial = phi - t * pg
            E_t, r_t = energy_and_residual(plan, params, trial, dx)
            if not math.isfinite(E_t):
                raise FloatingPointError("non-finite energy during descent")
            rmax_t = float(np.max(np.abs(r_t)))
            if cfg.step_rule == "fixed":
                accepted = E_t <= E + ACCEPT_SLACK * max(1.0, abs(E))
                break
            if _accept(E, E_t, slope, t, cfg.armijo_c, rmax, rmax_t):
                accepted = True
                break
            t *= cfg.shrink
        if not accepted:
            if newton_ok:
                phase = "newton"
                continue
            break
        y = r_t - r
        sy = float(np.dot(trial - phi, y))
        # BB1 step in the metric of the preconditioner: s = -t P r_old
        sPs = t * t * float(np.dot(pg, r))
        phi, E, r = trial, E_t, r_t
        trace.append(E)
        rmax = rmax_t
        tau = sPs / sy if sy > 0 else min(2.0 * t, 1e3)
        tau = float(np.clip(tau, 1e-8, 1e4))
        if rmax < 0.9 * best_rmax:
            best_rmax = rmax
            stall = 0
        else:
            stall += 1
        if newton_ok and (stall >= cfg.newton_after or rmax <= cfg.newton_switch):
            phase = "newton"
        if cfg.symmetrize_every and it % cfg.symmetrize_every == 0:
            sym = _try_symmetrize(plan, params, make_profile(p0.grid, params, phi,
                                                             p0.ell_minus, p0.ell_plus))
            if sym is not None:
                E_s, r_s = energy_and_residual(plan, params, sym.phi, dx)
                if E_s <= E:
                    phi, E, r = np.array(sym.phi), E_s, r_s
                    rmax = float(np.max(np.abs(r)))
                    trace[-1] = E

    prof = make_profile(p0.grid, params, phi, p0.ell_minus, p0.ell_plus)
    eb = energy(plan, params, prof)
    return MinimizeReport(prof, eb, rmax, it, np.asarray(trace), rmax <= cfg.tol_residual,
                          newton_steps)


# --------------------------------------------------------------- passages

@dataclass(frozen=True)
class Passage:
    x: float
    level: int  # the passage crosses phi = level * pi
    slope: float  # |phi'| at the crossing


def passages(p: Profile, tol: float = 1e-6) -> list[Passage]:
    """Crossings of the levels ``j*pi`` (where ``m1 = +-1``), with hysteresis ``tol``."""
    phi = p.phi
    x = p.x
    dx = p.grid.dx
    dphi = np.gradient(phi, dx)
    lo = math.floor(min(phi.min(), phi.max()) / math.pi) - 1
    hi = math.ceil(max(phi.min(), phi.max()) / math.pi) + 1
    if hi - lo > 100000:
        raise ValueError("phase range too large for passage detection")
    out: list[Passage] = []
    for j in range(lo, hi + 1):
        u = phi - j * math.pi
        sign = np.where(u > tol, 1, np.where(u < -tol, -1, 0))
        idx = np.flatnonzero(sign)
        if len(idx) < 2:
            continue
        s = sign[idx]
        changes = np.flatnonzero(s[1:] != s[:-1])
        for c in changes:
            i0, i1 = idx[c], idx[c + 1]
            # locate the zero between nodes i0 and i1 by linear interpolation
            seg = u[i0: i1 + 1]
            k = int(np.flatnonzero(np.sign(seg[:-1]) != np.sign(seg[1:]))[0]) \
                if np.any(np.sign(seg[:-1]) != np.sign(seg[1:])) else 0
            a, b = i0 + k, i0 + k + 1
            xa = x[a] + (x[b] - x[a]) * u[a] / (u[a] - u[b]) if u[a] != u[b] else x[a]
            out.append(Passage(float(xa), j, float(abs(np.interp(xa, x, dphi)))))
    out.sort(key=lambda q: q.x)
    return out


def expected_passage_count(params: AnisotropyParams, d: float) -> int:
    """Number of passages of a minimizer of degree ``d``: ``2|d| - 1`` for ``h > 1``,
    ``2|d|`` for ``h < 1`` and integer ``d``, ``2l - 1`` when
    ``|d| = l - 1 + alpha/pi`` or ``l - alpha/pi``."""
    d = abs(d)
    n, s = split_degree(params, d)
    if params.single_well:
        return max(2 * n - 1, 0)
    if s == 0:
        return 2 * n
    ell = n + 1 if s == 1 else n
    return 2 * ell - 1


def wall_centers(p: Profile, tol: float = 1e-6) -> np.ndarray:
    """Centers of the walls, taken at the passage each wall contains.

    For ``h < 1`` every passage lies inside a wall; for ``h > 1`` the walls are the
    ``2 pi`` turns through odd multiples of ``pi`` (even multiples are the wells).
    """
    ps = passages(p, tol)
    if p.params.single_well:
        ps = [q for q in ps if q.level % 2 != 0]
    return np.array([q.x for q in ps])


def gradient_peaks(p: Profile, rel_prominence: float = 0.02, min_sep_cells: int = 5) -> np.ndarray:
    """Local maxima of ``|phi'|`` (prominence-filtered, deduplicated within a few cells)."""
    g = np.abs(np.gradient(p.phi, p.grid.dx))
    if g.max() == 0:
        return np.array([])
    idx, _ = find_peaks(g, prominence=rel_prominence * g.max(), distance=min_sep_cells)
    return p.x[idx]


def wall_separation(p: Profile) -> float:
    c = wall_centers(p)
    return float(c.max() - c.min()) if len(c) >= 2 else 0.0


# --------------------------------------------------------------- symmetry

def _symmetry_center(p: Profile) -> tuple[float, float]:
    params = p.params
    d = p.degree
    n, s = split_degree(params, abs(d))
    if not params.single_well and s == 0:
        raise ValueError("symmetrization needs a degree in Z +- alpha/pi")
    phi0 = 0.5 * (p.ell_minus + p.ell_plus)
    u = p.phi - phi0
    sg = np.sign(u)
    cross = np.flatnonzero(sg[:-1] * sg[1:] <= 0)
    if len(cross) == 0:
        return 0.0, phi0
    # the crossing nearest to the middle of the profile
    i = cross[np.argmin(np.abs(p.x[cross]))] if len(cross) > 1 else cross[0]
    lo, hi = max(i - 2, 0), min(i + 4, len(u))
    xs, us = p.x[lo:hi], u[lo:hi]
    if np.all(np.diff(us) > 0) or np.all(np.diff(us) < 0):
        order = np.argsort(us)
        cs = CubicSpline(us[order], xs[order]) if len(us) >= 4 else None
        c = float(cs(0.0)) if cs is not None else float(np.interp(0.0, us[order], xs[order]))
    else:
        a, b = i, i + 1
        c = float(p.x[a])
        if u[a] != u[b]:
            c += float((p.x[b] - p.x[a]) * u[a] / (u[a] - u[b]))
    return c, phi0


def _shifted(p: Profile, c: float) -> np.ndarray:
    """``phi(x + c)`` on the same nodes (cubic interpolation, constant outside)."""
    if abs(c) < 1e-14 * p.grid.dx:
        return np.array(p.phi)
    cs = CubicSpline(p.x, p.phi)
    xs = p.x + c
    out = cs(xs)
    out[xs <= p.x[0]] = p.ell_minus
    out[xs >= p.x[-1]] = p.ell_plus
    return out


def symmetric_candidates(p: Profile) -> dict[str, Profile]:
    c, phi0 = _symmetry_center(p)
    ph = _shifted(p, c)
    rev = ph[::-1]
    N = len(ph)
    mid = N // 2
    pos = np.where(p.x >= 0, ph, 2 * phi0 - rev)
    neg = np.where(p.x <= 0, ph, 2 * phi0 - rev)
    odd = phi0 + 0.5 * ((ph - phi0) - (rev - phi0))
    if N % 2 == 1:
        pos[mid] = neg[mid] = odd[mid] = phi0
    mk = lambda a: make_profile(p.grid, p.params, a, p.ell_minus, p.ell_plus)  # noqa: E731
    return {"plus": mk(pos), "minus": mk(neg), "odd": mk(odd)}


def symmetrize(p: Profile, plan: SpectralPlan | None = None) -> Profile:
    """Center ``p`` at its middle passage and make ``phi - phi0`` odd.

    Three candidates are formed (right half mirrored, left half mirrored, odd
    average) and the one of lowest energy is returned.
    """
    plan = plan or SpectralPlan(p.grid)
    cands = symmetric_candidates(p)
    best = min(cands.values(), key=lambda q: energy(plan, p.params, q).total)
    return best


def _try_symmetrize(plan, params, p):
    try:
        return symmetrize(p, plan)
    except ValueError:
        return None


# ------------------------------------------------------------------ scans

SCAN_COLUMNS = ("h", "d", "L", "N", "total", "exchange", "aniso", "stray", "residual",
                "converged", "separation")


@dataclass
class ScanRow:
    h: float
    d: float
    L: float
    N: int
    total: float = math.nan
    exchange: float = math.nan
    aniso: float = math.nan
    stray: float = math.nan
    residual: float = math.nan
    converged: bool = False
    separation: float = math.nan
    error: str = ""
    report: MinimizeReport | None = field(default=None, repr=False)

    def as_csv_row(self) -> list[str]:
        vals = [self.h, self.d, self.L, self.N, self.total, self.exchange, self.aniso,
                self.stray, self.residual, self.converged, self.separation]
        return [repr(v) if isinstance(v, float) else str(v) for v in vals]


def scan_order(h_list: Iterable[float], d_list: Iterable[float]) -> list[tuple[float, float]]:
    """Continuation order: ``h`` moving toward 1, ascending ``d`` within each ``h``."""
    hs = sorted(set(h_list), key=lambda h: -abs(h - 1.0))
    return [(h, d) for h in hs for d in sorted(set(d_list))]


def _degree_for(params: AnisotropyParams, d) -> float:
    """Degree given as a number, or a string like ``'a/pi'``, ``'1-a/pi'``, ``'2+a/pi'``."""
    if isinstance(d, str):
        return parse_degree(d, params)
    return float(d)


def parse_degree(text: str, params: AnisotropyParams) -> float:
    t = text.replace(" ", "").lower()
    a = params.alpha / math.pi
    for tok in ("alpha/pi", "a/pi"):
        if tok in t:
            head, _, tail = t.partition(tok)
            if tail:
                raise ValueError(f"cannot parse degree {text!r}")
            if head in ("", "+"):
                return a
            if head == "-":
                return -a
            if head.endswith("+"):
                return float(head[:-1]) + a
            if head.endswith("-"):
                return float(head[:-1]) - a
            raise ValueError(f"cannot parse degree {text!r}")
    return float(t)


def start_profile(grid: Grid, params: AnisotropyParams, d: float,
                  spacing: float = 4.0) -> Profile:
    """Stacked unit-width walls ``spacing`` apart around the origin."""
    _, steps = wall_layout(params, d)
    nw = len(steps)
    L = grid.half_length
    spread = min(spacing * (nw - 1), 0.5 * L)
    centers = np.linspace(-spread / 2, spread / 2, nw) if nw > 1 else np.zeros(nw)
    return initial_guess(grid, params, d, "stacked_walls", centers=centers, widths=1.0)


def scan(h_list: Sequence[float], d_list: Sequence, L: float, N: int,
         cfg: MinimizeConfig | None = None, pad_factor: int = 4) -> list[ScanRow]:
    """Run :func:`minimize` on every ``(h, d)`` cell with warm starts.

    ``d_list`` entries are numbers or strings like ``'1-a/pi'`` (resolved per ``h``).
    A warm start is taken from the same degree label at the previous ``h`` after
    remapping the well phases.  Failures are reported in the row, never raised.
    """
    cfg = cfg or MinimizeConfig()
    grid = Grid(L, N)
    plan = SpectralPlan(grid, pad_factor)
    rows: list[ScanRow] = []
    last: dict[object, tuple[AnisotropyParams, Profile]] = {}
    hs = sorted(set(h_list), key=lambda h: -abs(h - 1.0))
    labels = list(d_list)
    for h in hs:
        params = AnisotropyParams(h)
        cell_list = []
        for lab in labels:
            try:
                cell_list.append((_degree_for(params, lab), lab))
            except ValueError as exc:
                rows.append(ScanRow(h, math.nan, L, N, error=str(exc)))
        cell_list.sort(key=lambda t: t[0])
        for d, lab in cell_list:
            row = ScanRow(h, d, L, N)
            try:
                if not params.is_admissible_degree(d):
                    raise ProfileError(f"degree {d} not admissible for h={h}")
                key = lab if isinstance(lab, str) else float(lab)
                p0 = start_profile(grid, params, d)
                if key in last:
                    old_params, old = last[key]
                    phi = remap_phase(old.phi, old_params.alpha, params.alpha)
                    try:
                        p0 = make_profile(grid, params, phi, p0.ell_minus, p0.ell_plus)
                    except ProfileError:
                        pass
                rep = minimize(plan, params, p0, cfg)
                last[key] = (params, rep.profile)
                e = rep.energy
                row.total, row.exchange = e.total, e.exchange
                row.aniso, row.stray = e.aniso, e.stray
                row.residual = rep.residual_max
                row.converged = rep.converged
                row.separation = wall_separation(rep.profile)
                row.report = rep
            except (ValueError, FloatingPointError, LinAlgError) as exc:
                row.error = str(exc)
                log.warning("scan cell h=%s d=%s failed: %s", h, d, exc)
            rows.append(row)
    return rows


def scan_to_csv(rows: Sequence[ScanRow], with_subadditivity: bool = True) -> str:
    """CSV of the scan (columns ``SCAN_COLUMNS``); optionally two more columns
    ``strict_subadditive`` and ``subadditivity_margin`` (empty when no split exists)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    sub = subadditivity(rows) if with_subadditivity else {}
    head = list(SCAN_COLUMNS)
    if with_subadditivity:
        head += ["strict_subadditive", "subadditivity_margin"]
    w.writerow(head)
    for r in rows:
        line = r.as_csv_row()
        if with_subadditivity:
            ok, m = sub.get((r.h, r.d), (None, math.nan))
            line += ["" if ok is None else str(ok), "" if ok is None else repr(float(m))]
        w.writerow(line)
    return buf.getvalue()


def subadditivity(rows: Sequence[ScanRow], tol: float = 1e-9) -> dict[tuple[float, float], tuple]:
    """For each converged cell ``(h, d)``: whether ``E(d) < E(d1) + E(d2)`` for every
    split ``d = d1 + d2`` into positive degrees available in ``rows`` at the same
    ``h``, and the smallest margin ``E(d1) + E(d2) - E(d)``.  Cells without any
    split map to ``(None, nan)``."""
    by_h: dict[float, dict[float, float]] = {}
    for r in rows:
        if r.converged and not r.error:
            by_h.setdefault(r.h, {})[r.d] = r.total
    out: dict[tuple[float, float], tuple] = {}
    for h, cells in by_h.items():
        degs = sorted(cells)
        for d in degs:
            margins = [cells[d1] + cells[d2] - cells[d]
                       for d1 in degs for d2 in degs
                       if d1 <= d2 and d1 > tol and abs(d1 + d2 - d) <= tol]
            if margins:
                m = min(margins)
                out[(h, d)] = (bool(m > 0), m)
            else:
                out[(h, d)] = (None, math.nan)
    return out


# ------------------------------------------------------------ dichotomy

@dataclass(frozen=True)
class DichotomyReport:
    h: float
    d: float
    L: tuple[float, ...]
    separation: tuple[float, ...]
    energy: tuple[float, ...]
    converged: tuple[bool, ...]
    signature: str  # "grows", "saturates" or "inconclusive"

    def to_dict(self) -> dict:
        return asdict(self)


def classify_separation(L: Sequence[float], sep: Sequence[float], grow_ratio: float = 0.25,
                        saturate_ratio: float = 0.05) -> str:
    """Signature of the separation-versus-domain curve.

    ``'grows'`` if every domain increase gains at least ``grow_ratio`` of itself in
    separation, ``'saturates'`` if the last increase gains at most
    ``saturate_ratio`` of itself, ``'inconclusive'`` otherwise.
    """
    L = np.asarray(L, dtype=float)
    sep = np.asarray(sep, dtype=float)
    if len(L) < 2:
        raise ValueError("need at least two domain sizes")
    gains = np.diff(sep) / np.diff(L)
    if np.all(gains >= grow_ratio):
        return "grows"
    if abs(gains[-1]) <= saturate_ratio:
        return "saturates"
    return "inconclusive"


def dichotomy_probe(params: AnisotropyParams, d: float, L_list: Sequence[float],
                    cfg: MinimizeConfig | None = None, dx: float = 0.05,
                    pad_factor: int = 4) -> DichotomyReport:
    """Minimize at each domain size (fixed spacing) and track the distance between
    the outermost walls.  Each run starts from the previous minimizer, resampled."""
    cfg = cfg or MinimizeConfig()
    L_list = sorted(float(v) for v in L_list)
    seps, ens, conv = [], [], []
    prev: Profile | None = None
    for L in L_list:
        grid = Grid.from_spacing(L, dx)
        plan = SpectralPlan(grid, pad_factor)
        p0 = resample(prev, grid) if prev is not None else start_profile(grid, params, d)
        rep = minimize(plan, params, p0, cfg)
        prev = rep.profile
        seps.append(wall_separation(rep.profile))
        ens.append(rep.energy.total)
        conv.append(rep.converged)
    return DichotomyReport(params.h, d, tuple(L_list), tuple(seps), tuple(ens), tuple(conv),
                           classify_separation(L_list, seps))
