"""Diagnostics on computed minimizers: tail-decay fits, the cubic growth of the
small-wall energy, pointwise bounds on ``Lambda f``, the weighted ``H^2`` tail
integral and symmetry defects."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np
from scipy import fft as sfft
from scipy.interpolate import CubicSpline

from .energy import energy
from .halfline import SpectralPlan, lambda_fourier
from .minimizer import MinimizeConfig, minimize, passages, start_profile
from .profile import AnisotropyParams, Grid, Profile

F_FLOOR = 1e-12
H2_TAIL_C = 100.0
MODELS = ("exponential", "power")


# ------------------------------------------------------------------ decay

@dataclass(frozen=True)
class DecayFit:
    window: tuple[float, float]
    model: str
    rate_or_exponent: float
    r_squared: float
    intercept: float = 0.0
    n_points: int = 0

    def __post_init__(self):
        if self.window[0] < 0:
            raise ValueError("window must start at x >= 0")
        if self.model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}")

    def to_dict(self) -> dict:
        return asdict(self)


def _linear_fit(u: np.ndarray, v: np.ndarray) -> tuple[float, float, float]:
    A = np.vstack([u, np.ones_like(u)]).T
    (slope, icpt), *_ = np.linalg.lstsq(A, v, rcond=None)
    resid = v - (slope * u + icpt)
    ss_tot = float(np.sum((v - v.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return float(slope), float(icpt), min(max(r2, 0.0), 1.0)


def fit_decay(x, y, model: str) -> DecayFit:
    """Least-squares fit of ``log|y|`` against ``x`` (exponential) or ``log x`` (power)."""
    x = np.asarray(x, dtype=float)
    v = np.log(np.abs(np.asarray(y, dtype=float)))
    if model == "exponential":
        slope, icpt, r2 = _linear_fit(x, v)
        rate = -slope
    elif model == "power":
        slope, icpt, r2 = _linear_fit(np.log(x), v)
        rate = slope
    else:
        raise ValueError(f"unknown model {model!r}")
    return DecayFit((float(x[0]), float(x[-1])), model, rate, r2, icpt, len(x))


def fit_tail_decay(p: Profile, params: AnisotropyParams | None = None,
                   model: str = "exponential", window: tuple[float, float] = (0.3, 0.8),
                   side: str = "right", center: float = 0.0) -> DecayFit:
    """Fit the tail of ``f = cos(phi) - k`` over ``|x - center|`` in
    ``[window[0] L, window[1] L]`` where ``|f| > 1e-12``.

    The exponential model returns the rate ``c`` of ``e^{-c x}``; the power model
    returns the exponent ``p`` of ``x^p``.
    """
    params = params or p.params
    if model not in MODELS:
        raise ValueError(f"unknown model {model!r}")
    L = p.grid.half_length
    lo, hi = window[0] * L, window[1] * L
    if side == "right":
        s = p.x - center
        f = p.f
    elif side == "left":
        s = center - p.x
        f = p.f
    else:
        raise ValueError("side must be 'right' or 'left'")
    sel = (s >= lo) & (s <= hi) & (np.abs(f) > F_FLOOR)
    if np.count_nonzero(sel) < 5:
        raise ValueError("decay window is empty (tail below the floor or domain too small)")
    order = np.argsort(s[sel])
    return fit_decay(s[sel][order], f[sel][order], model)


# ------------------------------------------------------------ cubic growth

@dataclass
class GrowthRow:
    alpha: float
    h: float
    L: float
    N: int
    e_small: float
    e_large: float
    converged: bool


@dataclass
class CubicGrowthReport:
    rows: list = field(default_factory=list)
    slope: float = float("nan")
    r_squared: float = float("nan")
    constant: float = float("nan")
    large_ratio: float = float("nan")

    @property
    def bound_holds(self) -> bool:
        return all(r.e_small <= self.constant * r.alpha ** 3 * (1 + 1e-12) for r in self.rows)

    def to_dict(self) -> dict:
        return {"rows": [asdict(r) for r in self.rows], "slope": self.slope,
                "r_squared": self.r_squared, "constant": self.constant,
                "large_ratio": self.large_ratio, "bound_holds": self.bound_holds}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def cubic_growth_study(h_list: Sequence[float], L: float, N: int,
                       cfg: MinimizeConfig | None = None,
                       scale_with_alpha: bool = True) -> CubicGrowthReport:
    """Minimize in the classes ``alpha/pi`` and ``1 - alpha/pi`` for each ``h`` and fit
    ``log E(alpha/pi)`` against ``log alpha``.

    The walls widen like ``1/alpha``; with ``scale_with_alpha`` the half-length is
    ``L * alpha_max / alpha`` at fixed spacing ``2L/(N-1)``.
    """
    cfg = cfg or MinimizeConfig()
    hs = sorted(float(h) for h in h_list)
    for h in hs:
        if not math.cos(0.5) - 1e-12 <= h < 1.0:
            raise ValueError(f"h={h} outside [cos(0.5), 1)")
    alphas = [math.acos(h) for h in hs]
    a_max = max(alphas)
    dx = 2.0 * L / (N - 1)
    rep = CubicGrowthReport()
    for h, a in zip(hs, alphas):
        Lh = L * a_max / a if scale_with_alpha else L
        grid = Grid.from_spacing(Lh, dx)
        plan = SpectralPlan(grid)
        params = AnisotropyParams(h)
        out = []
        for d in (a / math.pi, 1.0 - a / math.pi):
            r = minimize(plan, params, start_profile(grid, params, d), cfg)
            out.append(r)
        rep.rows.append(GrowthRow(a, h, grid.half_length, grid.n_points,
                                  out[0].energy.total, out[1].energy.total,
                                  bool(out[0].converged and out[1].converged)))
    rep.rows.sort(key=lambda r: r.alpha)
    la = np.log([r.alpha for r in rep.rows])
    le = np.log([r.e_small for r in rep.rows])
    rep.slope, _, rep.r_squared = _linear_fit(la, le)
    rep.constant = max(r.e_small / r.alpha ** 3 for r in rep.rows)
    el = [r.e_large for r in rep.rows]
    rep.large_ratio = max(el) / min(el)
    return rep


# ------------------------------------------------------ pointwise Lambda

@dataclass(frozen=True)
class LambdaBound:
    holds: bool
    constant: float  # fitted C in |Lambda f| <= C / (x - a)
    exponent: float  # fitted envelope exponent of |Lambda f| in (x - a)
    margin: float    # 1 - (sup over the check half) / C


def last_passage(p: Profile) -> float:
    ps = passages(p)
    return ps[-1].x if ps else 0.0


def pointwise_lambda_bound_check(p: Profile, params: AnisotropyParams | None = None,
                                 a: float | None = None, plan: SpectralPlan | None = None,
                                 window: tuple[float, float] = (1.0, 0.8)) -> LambdaBound:
    """Check ``|Lambda f(x)| <= C/(x - a)`` on the tail beyond ``a``.

    ``C`` is fitted as the supremum of ``(x - a)|Lambda f|`` over the first half of
    the tail window ``[a + window[0], window[1] L]``; the bound holds when the
    second half stays below the same ``C`` (a predictive, not a tautological, test).
    """
    params = params or p.params
    plan = plan or SpectralPlan(p.grid)
    a = last_passage(p) if a is None else a
    lf = lambda_fourier(plan, p.f)
    x = p.x
    sel = (x >= a + window[0]) & (x <= window[1] * p.grid.half_length)
    if np.count_nonzero(sel) < 4:
        raise ValueError("tail window beyond a is too short")
    s, g = x[sel] - a, np.abs(lf[sel])
    if np.all(g == 0):
        return LambdaBound(True, 0.0, float("nan"), 1.0)
    w = s * g
    half = len(s) // 2
    C = float(w[:half].max())
    later = float(w[half:].max())
    nz = g > 1e-300
    exponent = fit_decay(s[nz], g[nz], "power").rate_or_exponent if np.count_nonzero(nz) >= 4 \
        else float("nan")
    margin = 1.0 - later / C if C > 0 else 0.0
    return LambdaBound(bool(later <= C * (1 + 1e-9)), C, exponent, margin)


# -------------------------------------------------------------- H^2 tail

@dataclass(frozen=True)
class H2Tail:
    holds: bool
    integral: float
    bound: float
    local_part: float
    field_part: float


def _field_hessian_integral(plan: SpectralPlan, lf: np.ndarray, x1_min: float,
                            n_levels: int = 64) -> float:
    """``int_{x1 > x1_min, x2 > 0} |D^2 u|^2`` where ``d_1 u = Lambda f`` on the boundary."""
    grid = plan.base_grid
    x = grid.x
    M = plan.M
    xi = plan.xi[: M // 2 + 1]
    ah = sfft.rfft(lf, n=M)
    top = 2.0 * grid.half_length
    x2 = np.concatenate([[0.0], np.geomspace(grid.dx / 8, top, n_levels - 1)])
    mask = x >= x1_min
    vals = np.empty(len(x2))
    for i, t in enumerate(x2):
        damp = ah * np.exp(-np.abs(xi) * t)
        u11 = sfft.irfft(1j * xi * damp, n=M)[: grid.n_points]
        u12 = sfft.irfft(-np.abs(xi) * damp, n=M)[: grid.n_points]
        dens = 2.0 * (u11 ** 2 + u12 ** 2)
        vals[i] = np.trapezoid(dens[mask], x[mask])
    return float(np.trapezoid(vals, x2))


def h2_tail_check(p: Profile, params: AnisotropyParams | None = None, a: float | None = None,
                  R: float = 5.0, C: float = H2_TAIL_C, plan: SpectralPlan | None = None,
                  total_energy: float | None = None) -> H2Tail:
    """``int_{a+R}^inf (phi''^2 + phi'^2 sin^2 phi + phi'^4 (1 + cot^2 phi))
    + int |D^2 u|^2 <= C E / R^2``, with ``sin(phi) != 0`` required beyond ``a``."""
    params = params or p.params
    plan = plan or SpectralPlan(p.grid)
    a = last_passage(p) if a is None else a
    x, phi, dx = p.x, p.phi, p.grid.dx
    beyond = x > a
    s = np.sin(phi)
    if np.any(s[beyond][:-1] == 0.0):
        raise ValueError("sin(phi) vanishes beyond a")
    E = energy(plan, params, p).total if total_energy is None else total_energy
    d1 = np.gradient(phi, dx, edge_order=2)
    d2 = np.gradient(d1, dx, edge_order=2)
    with np.errstate(divide="ignore", invalid="ignore"):
        cot2 = np.where(np.abs(s) > 0, (np.cos(phi) / s) ** 2, 0.0)
    dens = d2 ** 2 + d1 ** 2 * s ** 2 + d1 ** 4 * (1.0 + cot2)
    sel = x >= a + R
    local = float(np.trapezoid(dens[sel], x[sel])) if np.count_nonzero(sel) > 1 else 0.0
    lf = lambda_fourier(plan, p.f)
    fld = _field_hessian_integral(plan, lf, a + R) if np.any(lf) else 0.0
    total = local + fld
    bound = C * E / R ** 2
    return H2Tail(bool(total <= bound), total, bound, local, fld)


# --------------------------------------------------------------- symmetry

@dataclass(frozen=True)
class SymmetryDefects:
    center: float
    even_defect_m1: float
    odd_defect_m2: float


def symmetry_metrics(p: Profile, center: float | None = None) -> SymmetryDefects:
    """Center at the middle passage and return ``max|m1(c+s) - m1(c-s)|`` and
    ``max|m2(c+s) + m2(c-s)|`` over the symmetric part of the grid."""
    if center is None:
        ps = passages(p)
        center = ps[len(ps) // 2].x if ps else 0.0
    L = p.grid.half_length
    reach = L - abs(center)
    s = p.x[(p.x >= 0) & (p.x <= reach)]
    cs = CubicSpline(p.x, p.phi)
    right = cs(center + s)
    left = cs(center - s)
    e = float(np.max(np.abs(np.cos(right) - np.cos(left))))
    o = float(np.max(np.abs(np.sin(right) + np.sin(left))))
    return SymmetryDefects(float(center), e, o)
