"""Surgeries on profiles: reflection, conjugation, cut-off localization, gluing of
two localized profiles at a separation, and the splitting of a degree-one profile
into the parts with ``m1 >= k`` and ``m1 <= k``."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .profile import AnisotropyParams, Grid, Profile, ProfileError, make_profile, split_degree

CORE_TOL = 1e-12


class ConstructionError(ValueError):
    """A precondition of a construction does not hold."""


def reflect(p: Profile) -> Profile:
    """``x -> -x``: the lift becomes ``phi(-x)`` and the limits swap, so the degree
    changes sign while every energy term is unchanged."""
    return make_profile(p.grid, p.params, p.phi[::-1], p.ell_plus, p.ell_minus)


def conjugate(p: Profile) -> Profile:
    """``m2 -> -m2``, i.e. ``phi -> -phi``."""
    return make_profile(p.grid, p.params, -p.phi, -p.ell_minus, -p.ell_plus)


def _reflect_conjugate(p: Profile) -> Profile:
    # -phi(-x): same degree, limits swapped and negated
    return conjugate(reflect(p))


# ---------------------------------------------------------------- cut-off

def cutoff_eta(x) -> np.ndarray:
    """Even C^{1,1} cut-off: 1 on ``|x| <= 1/2``, ``(1 - |x|)^2`` on ``[3/4, 1]``,
    0 beyond 1, and two quadratic shoulders in between (values in ``[1/16, 1]``)."""
    t = np.abs(np.asarray(x, dtype=float))
    out = np.zeros_like(t)
    out[t <= 0.5] = 1.0
    s1 = (t > 0.5) & (t <= 0.625)
    out[s1] = 1.0 - 29.0 * (t[s1] - 0.5) ** 2
    s2 = (t > 0.625) & (t < 0.75)
    u = t[s2] - 0.75
    out[s2] = 1.0 / 16.0 - 0.5 * u + 27.0 * u * u
    s3 = (t >= 0.75) & (t < 1.0)
    out[s3] = (1.0 - t[s3]) ** 2
    return out


def _oscillation_bound(params: AnisotropyParams) -> float:
    return params.alpha / 2 if not params.single_well else math.pi / 2


def _relift(m1: np.ndarray, phi: np.ndarray, ell: float) -> np.ndarray:
    base = 2 * math.pi * round(ell / (2 * math.pi))
    return base + np.sign(phi - base) * np.arccos(np.clip(m1, -1.0, 1.0))


def localize(p: Profile, R: float, params: AnisotropyParams | None = None) -> Profile:
    """Replace ``m1`` by ``eta(x/2R) m1 + (1 - eta(x/2R)) k`` and re-lift.

    The result equals ``p`` on ``[-R, R]``, sits at the limit wells outside
    ``[-2R, 2R]`` and has the same degree.  Requires ``1 <= R``, ``2R <= 0.9 L`` and
    that ``|phi - ell_pm|`` stays below ``alpha/2`` (``pi/2`` for ``h > 1``)
    beyond ``R``.
    """
    params = params or p.params
    if params != p.params:
        raise ValueError("params do not match the profile")
    L = p.grid.half_length
    if R < 1.0 or 2.0 * R > 0.9 * L:
        raise ConstructionError(f"need 1 <= R and 2R <= 0.9 L (R={R}, L={L})")
    x, phi = p.x, p.phi
    left, right = x <= -R, x >= R
    bound = _oscillation_bound(params)
    dev = max(np.max(np.abs(phi[left] - p.ell_minus), initial=0.0),
              np.max(np.abs(phi[right] - p.ell_plus), initial=0.0))
    if dev > bound:
        raise ConstructionError(
            f"tail oscillation {dev:.3g} exceeds {bound:.3g} beyond R={R}")
    eta = cutoff_eta(x / (2.0 * R))
    f = p.f
    m1 = params.k + eta * f
    out = np.array(phi, dtype=float)
    out[left] = _relift(m1[left], phi[left], p.ell_minus)
    out[right] = _relift(m1[right], phi[right], p.ell_plus)
    # exactly at the wells where the cut-off vanishes
    out[(x <= -2 * R)] = p.ell_minus
    out[(x >= 2 * R)] = p.ell_plus
    return make_profile(p.grid, params, out, p.ell_minus, p.ell_plus)


def core_radius(p: Profile, tol: float = CORE_TOL) -> float:
    """Smallest ``R`` such that ``phi`` equals its limits (within ``tol``) off ``[-R, R]``."""
    x, phi = p.x, p.phi
    off = np.where(x < 0, np.abs(phi - p.ell_minus), np.abs(phi - p.ell_plus)) > tol
    if not np.any(off):
        return 0.0
    idx = np.flatnonzero(off)
    return float(max(-x[idx[0]], x[idx[-1]], 0.0)) + p.grid.dx


# ------------------------------------------------------------------ gluing

class GlueResult(NamedTuple):
    profile: Profile
    f_left: np.ndarray   # f of the shifted first part on the output grid
    f_right: np.ndarray  # f of the shifted second part
    adjustment: str


def _compatible(b1: float, b2: float) -> bool:
    r = (b2 - b1) / (2 * math.pi)
    return abs(r - round(r)) < 1e-9


def _shift_pi(p: Profile) -> Profile:
    return make_profile(p.grid, p.params, p.phi + math.pi, p.ell_minus + math.pi,
                        p.ell_plus + math.pi)


def _glue_candidates(p1: Profile, p2: Profile, alpha: float):
    yield "none", p1, p2
    yield "swap", p2, p1
    yield "reflect_first", _reflect_conjugate(p1), p2
    yield "reflect_second", p1, _reflect_conjugate(p2)
    if abs(alpha - math.pi / 2) < 1e-12:
        yield "shift_pi", p1, _shift_pi(p2)


def glue(p1: Profile, p2: Profile, r: float, params: AnisotropyParams | None = None,
         margin: float | None = None) -> GlueResult:
    """Place ``p1`` centered at ``-r`` and ``p2`` at ``+r``:
    ``psi(x) = phi1(x + r)`` for ``x <= 0`` and ``phi2(x - r) - beta2 + beta1`` after.

    Both inputs must be localized.  If the inner limits ``beta1 = ell_plus(p1)`` and
    ``beta2 = ell_minus(p2)`` differ by a non-multiple of ``2 pi``, the adjustments
    tried in order are: exchanging the two parts, replacing either part by
    ``-phi(-x)``, and (for ``alpha = pi/2``) shifting the second part by ``pi``.
    """
    params = params or p1.params
    if p1.params != params or p2.params != params:
        raise ValueError("params do not match the profiles")
    dx = p1.grid.dx
    if abs(p2.grid.dx - dx) > 1e-12 * dx:
        raise ValueError("profiles must share the grid spacing")
    d1, d2 = p1.degree, p2.degree
    a = params.alpha
    if abs(a - math.pi / 3) < 1e-12:
        dd = d2 - d1
        if abs(dd - round(dd)) < 1e-9 and abs(d1 + d2 - round(d1 + d2)) > 1e-9:
            raise ConstructionError(
                "alpha = pi/3 with d2 - d1 integer needs an integer total degree")
    for tag, q1, q2 in _glue_candidates(p1, p2, a):
        if _compatible(q1.ell_plus, q2.ell_minus):
            break
    else:
        raise ConstructionError("no allowed adjustment makes the inner limits compatible")
    R1, R2 = core_radius(q1), core_radius(q2)
    if r < max(R1, R2):
        raise ConstructionError(f"separation {r} smaller than the cores ({R1:.3g}, {R2:.3g})")
    if margin is None:
        margin = max(p1.grid.half_length, p2.grid.half_length) / 5.0
    n_half = int(math.ceil((r + max(R1, R2) + margin) / dx))
    grid = Grid(n_half * dx, 2 * n_half + 1)
    x = grid.x
    b1, b2 = q1.ell_plus, q2.ell_minus
    left = np.interp(x + r, q1.x, q1.phi, left=q1.ell_minus, right=q1.ell_plus)
    right = np.interp(x - r, q2.x, q2.phi, left=q2.ell_minus, right=q2.ell_plus) - b2 + b1
    psi = np.where(x <= 0, left, right)
    prof = make_profile(grid, params, psi, q1.ell_minus, q2.ell_plus - b2 + b1)
    k_dev = lambda ph: -2.0 * np.sin(0.5 * (ph + a)) * np.sin(0.5 * (ph - a))  # noqa: E731
    return GlueResult(prof, k_dev(left), k_dev(right), tag)


# --------------------------------------------------------------- splitting

def _first_level_crossing(phi: np.ndarray, parity: int) -> int | None:
    """Index ``i`` of the first cell ``[i, i+1]`` on which ``phi`` meets a level
    ``n pi`` with ``n % 2 == parity``."""
    lo = np.minimum(phi[:-1], phi[1:])
    hi = np.maximum(phi[:-1], phi[1:])
    # smallest level of the right parity that is >= lo
    n = np.ceil(lo / math.pi)
    n = n + ((n - parity) % 2)
    hit = np.flatnonzero(n * math.pi <= hi)
    return int(hit[0]) if hit.size else None


def _sign_switch(n: int, i: int, first: float, second: float) -> np.ndarray:
    s = np.full(n, first)
    s[i + 1:] = second
    return s


def split_parts(p: Profile, params: AnisotropyParams | None = None) -> tuple[Profile, Profile]:
    """Split a degree-one profile (``h < 1``) into ``m1+ = max(m1, k)`` of degree
    ``alpha/pi`` and ``m1- = min(m1, k)`` of degree ``1 - alpha/pi``.

    ``m2`` of each part is ``+-sqrt(1 - m1^2)`` with a single sign change at the
    first passage of ``p`` through ``m1 = 1`` (resp. ``m1 = -1``).  The anisotropy
    splits nodewise; the discrete exchange of the parts can only be smaller, by
    ``O(dx)``, from the cells where ``m1`` crosses ``k``.
    """
    params = params or p.params
    if params != p.params:
        raise ValueError("params do not match the profile")
    if params.single_well:
        raise ConstructionError("splitting needs h < 1")
    if abs(p.degree - 1.0) > 1e-9:
        raise ConstructionError(f"splitting needs degree 1, got {p.degree:.6g}")
    i_plus = _first_level_crossing(p.phi, 0)
    i_minus = _first_level_crossing(p.phi, 1)
    if i_plus is None or i_minus is None:
        raise ConstructionError("profile must pass through both m1 = 1 and m1 = -1")
    k, a = params.k, params.alpha
    n = p.grid.n_points
    m1 = p.m1
    up = np.arccos(np.clip(np.maximum(m1, k), -1.0, 1.0))
    dn = np.arccos(np.clip(np.minimum(m1, k), -1.0, 1.0))
    # ends exactly at the wells
    up[0] = up[-1] = a
    dn[0] = dn[-1] = a
    phi_plus = _sign_switch(n, i_plus, -1.0, 1.0) * up
    s = _sign_switch(n, i_minus, 0.0, 1.0)
    phi_minus = 2 * math.pi * s + (1 - 2 * s) * dn
    try:
        plus = make_profile(p.grid, params, phi_plus, -a, a)
        minus = make_profile(p.grid, params, phi_minus, a, 2 * math.pi - a)
    except ProfileError as exc:  # pragma: no cover - limits are wells by construction
        raise ConstructionError(str(exc)) from exc
    split_degree(params, plus.degree)
    return plus, minus
