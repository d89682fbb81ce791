"""The purely local model ``phi'' = W'(phi)``: heteroclinic walls from the first
integral, the zero set of the Hamiltonian and a shooting probe showing that no
orbit connects non-adjacent wells."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .anisotropy import potential, w_value
from .profile import AnisotropyParams, Grid, Profile, limits_for_degree, make_profile

WELL_CLAMP = 1e-10


@dataclass(frozen=True, eq=False)
class LocalWall:
    """A heteroclinic ``phi(t)`` between consecutive wells, sampled on ``t``."""

    t: np.ndarray
    phi: np.ndarray
    dphi: np.ndarray
    start_well: float
    end_well: float
    profile: Profile

    @property
    def degree(self) -> float:
        return (self.end_well - self.start_well) / (2 * math.pi)

    def exchange_integral(self) -> float:
        """``int phi'^2 dt``."""
        return float(np.trapezoid(self.dphi ** 2, self.t))

    def potential_integral(self, params: AnisotropyParams) -> float:
        """``int 2 W(phi) dt``."""
        return float(np.trapezoid(2.0 * w_value(params, self.phi), self.t))


def wall_wells(params: AnisotropyParams, kind: str = "small") -> tuple[float, float]:
    """End wells of the wall: ``small`` is ``-alpha -> alpha`` and ``large`` is
    ``alpha -> 2 pi - alpha`` (for ``h > 1`` both mean ``0 -> 2 pi``)."""
    if params.single_well:
        return 0.0, 2 * math.pi
    a = params.alpha
    if kind == "small":
        return -a, a
    if kind == "large":
        return a, 2 * math.pi - a
    raise ValueError(f"unknown wall kind {kind!r}")


def local_heteroclinic(params: AnisotropyParams, direction: int = 1, kind: str = "small",
                       grid: Grid | None = None) -> LocalWall:
    """Integrate ``phi' = sqrt(2 W(phi))`` forward and backward from the midpoint
    between two consecutive wells.

    Steps are clamped once the phase is within ``1e-10`` of a well; from there on the
    profile is set to the well.  ``direction=-1`` returns the mirror wall (phase
    decreasing).
    """
    if direction not in (1, -1):
        raise ValueError("direction must be +1 or -1")
    w0, w1 = wall_wells(params, kind)
    mid = 0.5 * (w0 + w1)
    grid = grid or Grid(40.0, 8001)

    def rhs(_t, y):
        return [math.sqrt(max(2.0 * float(w_value(params, y[0])), 0.0))]

    def near_end(_t, y):
        return (w1 - y[0]) - WELL_CLAMP

    def near_start(_t, y):
        return (y[0] - w0) - WELL_CLAMP

    near_end.terminal = True
    near_start.terminal = True
    T = grid.half_length
    fw = solve_ivp(rhs, (0.0, T), [mid], method="DOP853", rtol=1e-13, atol=1e-15,
                   dense_output=True, events=near_end)
    bw = solve_ivp(rhs, (0.0, -T), [mid], method="DOP853", rtol=1e-13, atol=1e-15,
                   dense_output=True, events=near_start)
    t = grid.x
    phi = np.empty_like(t)
    pos = t >= 0
    tf, tb = fw.t[-1], bw.t[-1]
    phi[pos] = np.where(t[pos] <= tf, fw.sol(np.minimum(t[pos], tf))[0], w1)
    phi[~pos] = np.where(t[~pos] >= tb, bw.sol(np.maximum(t[~pos], tb))[0], w0)
    phi = np.clip(phi, w0, w1)
    dphi = np.sqrt(np.maximum(2.0 * w_value(params, phi), 0.0))
    if direction == -1:
        phi, dphi = (w0 + w1) - phi, dphi
        lo, hi = w1, w0
    else:
        lo, hi = w0, w1
    prof = make_profile(grid, params, phi, lo, hi)
    return LocalWall(t.copy(), phi, dphi, lo, hi, prof)


def allen_cahn_residual(params: AnisotropyParams, wall: LocalWall) -> float:
    """Max of ``|phi'' - W'(phi)|`` along the sampled wall; ``phi''`` is the
    fourth-order difference of the first-integral velocity ``sqrt(2 W(phi))``."""
    t, v = wall.t, wall.dphi
    dt = t[1] - t[0]
    acc = (-v[4:] + 8.0 * v[3:-1] - 8.0 * v[1:-3] + v[:-4]) / (12.0 * dt)
    sgn = 1.0 if wall.end_well > wall.start_well else -1.0
    dw = potential(params, wall.phi[2:-2]).dw_dphi
    return float(np.max(np.abs(sgn * acc - dw)))


# ------------------------------------------------------------ Hamiltonian

@dataclass(frozen=True, eq=False)
class ZeroComponent:
    sign: int  # +1 for Z+, -1 for Z-
    start: float
    end: float
    x1: np.ndarray
    x2: np.ndarray
    consecutive: bool


@dataclass(frozen=True, eq=False)
class ZeroSet:
    wells: np.ndarray  # Z0
    components: list = field(default_factory=list)

    @property
    def all_consecutive(self) -> bool:
        return all(c.consecutive for c in self.components)


def hamiltonian(params: AnisotropyParams, x1, x2):
    """``H = x2^2/2 - W(x1)``."""
    return 0.5 * np.asarray(x2) ** 2 - w_value(params, x1)


def hamiltonian_zero_set(params: AnisotropyParams, phi_range=(-2 * math.pi, 2 * math.pi),
                         n_samples: int = 20001) -> ZeroSet:
    """Sample ``{H = 0}`` over ``phi_range``: the wells ``Z0`` and the arcs
    ``x2 = +-sqrt(2 W(x1))`` between them, checking that every arc ends at two
    consecutive wells."""
    lo, hi = phi_range
    wells = params.well_phases(lo, hi)
    x1 = np.linspace(lo, hi, n_samples)
    comps = []
    edges = np.concatenate([[lo], wells, [hi]])
    for a, b in zip(edges[:-1], edges[1:]):
        if b - a <= 0:
            continue
        sel = (x1 > a) & (x1 < b)
        xs = np.concatenate([[a], x1[sel], [b]])
        w = w_value(params, xs)
        positive = np.all(w[1:-1] > 0)
        a_is_well = params.is_well_phase(a)
        b_is_well = params.is_well_phase(b)
        between = np.sum((wells > a + 1e-12) & (wells < b - 1e-12))
        consecutive = bool(positive and a_is_well and b_is_well and between == 0)
        if not (a_is_well and b_is_well):
            continue  # arc cut by the sampling window
        for sign in (1, -1):
            comps.append(ZeroComponent(sign, float(a), float(b), xs,
                                       sign * np.sqrt(np.maximum(2.0 * w, 0.0)), consecutive))
    return ZeroSet(wells, comps)


# ---------------------------------------------------------------- shooting

@dataclass(frozen=True)
class ShootingRun:
    slope: float
    outcome: str  # "connected", "adjacent", "returned", "escaped"
    drift: float  # max |phi'^2 - 2W - q| along the run


@dataclass(frozen=True)
class NonexistenceReport:
    h: float
    target_degree: float
    start_well: float
    target_well: float
    adjacent_well: float
    runs: tuple
    connections: int
    max_drift: float

    def counts(self) -> dict:
        out: dict = {}
        for r in self.runs:
            out[r.outcome] = out.get(r.outcome, 0) + 1
        return out


def _shoot(params: AnisotropyParams, x0: float, v0: float, target: float, adjacent: float,
           strip: tuple[float, float], t_max: float, tol: float) -> ShootingRun:
    q = v0 * v0 - 2.0 * float(w_value(params, x0))

    def rhs(_t, y):
        return [y[1], float(potential(params, y[0]).dw_dphi)]

    def turn(_t, y):
        return y[1]

    def leave_lo(_t, y):
        return y[0] - strip[0]

    def leave_hi(_t, y):
        return strip[1] - y[0]

    for ev in (turn, leave_lo, leave_hi):
        ev.terminal = True
    sol = solve_ivp(rhs, (0.0, t_max), [x0, v0], method="DOP853", rtol=1e-12, atol=1e-14,
                    events=(turn, leave_lo, leave_hi))
    X1, X2 = sol.y
    drift = float(np.max(np.abs(X2 ** 2 - 2.0 * w_value(params, X1) - q)))
    xe, ve = X1[-1], X2[-1]
    # a connection has to come to rest at the target well
    if sol.t_events[0].size:
        outcome = "returned"
    elif sol.t_events[1].size or sol.t_events[2].size:
        outcome = "escaped"
    elif abs(xe - target) < tol and abs(ve) < tol:
        outcome = "connected"
    elif abs(xe - adjacent) < 1e-3 and abs(ve) < 1e-3:
        outcome = "adjacent"
    else:
        outcome = "escaped"
    return ShootingRun(float(v0), outcome, drift)


def local_nonexistence_probe(params: AnisotropyParams, target_degree: float,
                             n_slopes: int = 200, delta: float = 1e-4, spread: float = 0.5,
                             seed: int | None = None, t_max: float = 200.0,
                             tol: float = 1e-6) -> NonexistenceReport:
    """Shoot from ``well + delta`` with slopes around the zero-energy value
    ``sqrt(2 W(well + delta))`` and count orbits that end at the target well.

    Slopes are ``base * (1 + s)`` with ``s`` evenly spaced in ``[-spread, spread]``
    (or drawn uniformly from that interval when ``seed`` is given).
    """
    ell_minus, ell_plus = limits_for_degree(params, abs(target_degree))
    wells = params.well_phases(ell_minus + 1e-9, ell_plus + 1.0)
    adjacent = float(wells[wells > ell_minus + 1e-9][0])
    x0 = ell_minus + delta
    base = math.sqrt(2.0 * float(w_value(params, x0)))
    if seed is None:
        s = np.linspace(-spread, spread, n_slopes)
    else:
        s = np.sort(np.random.default_rng(seed).uniform(-spread, spread, n_slopes))
    strip = (ell_minus - math.pi, ell_plus + math.pi)
    runs = tuple(_shoot(params, x0, base * (1 + si), ell_plus, adjacent, strip, t_max, tol)
                 for si in s)
    conn = sum(r.outcome == "connected" for r in runs)
    return NonexistenceReport(params.h, float(target_degree), ell_minus, ell_plus, adjacent,
                              runs, conn, max(r.drift for r in runs))


def shoot_adjacent(params: AnisotropyParams, kind: str = "small", delta: float = 1e-6,
                   t_max: float = 60.0):
    """Zero-energy shot from the first well of ``kind`` (for comparison with
    :func:`local_heteroclinic`); returns ``(t, phi)`` up to the closest approach."""
    w0, w1 = wall_wells(params, kind)
    x0 = w0 + delta
    v0 = math.sqrt(2.0 * float(w_value(params, x0)))

    def rhs(_t, y):
        return [y[1], float(potential(params, y[0]).dw_dphi)]

    def turn(_t, y):
        return y[1]

    def past(_t, y):
        return w1 - y[0]

    turn.terminal = True
    past.terminal = True
    sol = solve_ivp(rhs, (0.0, t_max), [x0, v0], method="DOP853", rtol=1e-13, atol=1e-15,
                    events=(turn, past), dense_output=True)
    return sol
