"""Grids, phase-lift profiles, winding numbers and profile files.

A profile is stored as its phase lift ``phi`` on a uniform grid over
``[-L, L]``; outside the grid it is continued by the constant limits
``ell_minus`` / ``ell_plus``.  Because the end values are pinned to well
phases the winding number is a property of the boundary data alone.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Sequence

import numpy as np

WELL_TOL = 1e-9
FORMAT_VERSION = 1


class ProfileError(ValueError):
    """Invalid profile data (length mismatch, inadmissible limits, ...)."""


class ProfileFormatError(ProfileError):
    """A profile file could not be parsed."""


@dataclass(frozen=True)
class Grid:
    """Uniform mesh ``x_i = -L + i*dx`` on ``[-L, L]`` with ``N`` nodes."""

    half_length: float
    n_points: int

    def __post_init__(self):
        if not (self.half_length > 0 and math.isfinite(self.half_length)):
            raise ProfileError(f"half_length must be positive, got {self.half_length}")
        if int(self.n_points) != self.n_points or self.n_points < 16:
            raise ProfileError(f"n_points must be an integer >= 16, got {self.n_points}")
        object.__setattr__(self, "half_length", float(self.half_length))
        object.__setattr__(self, "n_points", int(self.n_points))

    @property
    def L(self) -> float:
        return self.half_length

    @property
    def N(self) -> int:
        return self.n_points

    @property
    def dx(self) -> float:
        return 2.0 * self.half_length / (self.n_points - 1)

    @cached_property
    def x(self) -> np.ndarray:
        x = -self.half_length + self.dx * np.arange(self.n_points)
        x[-1] = self.half_length
        x.setflags(write=False)
        return x

    @classmethod
    def from_spacing(cls, half_length: float, dx: float) -> "Grid":
        """Grid on ``[-L, L]`` whose spacing is as close as possible to ``dx``."""
        n = int(round(2.0 * half_length / dx)) + 1
        return cls(half_length, max(n, 16))


@dataclass(frozen=True)
class AnisotropyParams:
    """External field ``h`` (``h >= 0``, ``h != 1``) with ``k = min(h, 1)``
    and ``alpha = arccos(k)``."""

    h: float

    def __post_init__(self):
        h = float(self.h)
        if not math.isfinite(h) or h < 0:
            raise ValueError(f"h must be a finite nonnegative number, got {self.h}")
        if h == 1.0:
            raise ValueError("h = 1 is degenerate and not supported")
        object.__setattr__(self, "h", h)

    @property
    def k(self) -> float:
        return min(self.h, 1.0)

    @property
    def alpha(self) -> float:
        return math.acos(self.k)

    @property
    def single_well(self) -> bool:
        return self.h > 1.0

    def is_well_phase(self, phase: float, tol: float = WELL_TOL) -> bool:
        """True if ``phase`` lies in ``2*pi*Z + {-alpha, alpha}``."""
        a = self.alpha
        for s in (a, -a):
            r = (phase - s) / (2 * math.pi)
            if abs(r - round(r)) * 2 * math.pi <= tol:
                return True
        return False

    def is_admissible_degree(self, d: float, tol: float = 1e-9) -> bool:
        try:
            split_degree(self, d, tol)
        except ProfileError:
            return False
        return True

    def well_phases(self, lo: float, hi: float) -> np.ndarray:
        """Sorted well phases in ``[lo, hi]``."""
        a = self.alpha
        j = np.arange(math.floor(lo / (2 * math.pi)) - 1, math.ceil(hi / (2 * math.pi)) + 2)
        cand = np.unique(np.concatenate([2 * math.pi * j - a, 2 * math.pi * j + a]))
        return cand[(cand >= lo - WELL_TOL) & (cand <= hi + WELL_TOL)]


def split_degree(params: AnisotropyParams, d: float, tol: float = 1e-9) -> tuple[int, int]:
    """Write ``d = n + s*alpha/pi`` with integer ``n`` and ``s`` in {0, 1, -1}.

    Raises ProfileError when ``d`` is not an admissible winding number.
    """
    frac = params.alpha / math.pi
    for s in (0, 1, -1):
        if s and frac == 0.0:
            continue
        n = d - s * frac
        if abs(n - round(n)) <= tol:
            return int(round(n)), s
    raise ProfileError(f"inadmissible degree {d} for h={params.h} (alpha/pi={frac:.6g})")


def limits_for_degree(params: AnisotropyParams, d: float) -> tuple[float, float]:
    """Canonical boundary lifts ``(ell_minus, ell_plus)`` of winding number ``d``."""
    n, s = split_degree(params, d)
    a = params.alpha
    if s == 1:
        return -a, 2 * math.pi * n + a
    if s == -1:
        return a, 2 * math.pi * n - a
    return -a, 2 * math.pi * n - a


@dataclass(frozen=True, eq=False)
class Profile:
    """Phase lift ``phi`` on ``grid`` with pinned limits ``ell_minus``/``ell_plus``."""

    grid: Grid
    params: AnisotropyParams
    phi: np.ndarray
    ell_minus: float
    ell_plus: float

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    @property
    def m1(self) -> np.ndarray:
        return np.cos(self.phi)

    @property
    def m2(self) -> np.ndarray:
        return np.sin(self.phi)

    @property
    def f(self) -> np.ndarray:
        """``m1 - k`` evaluated without cancellation near the wells."""
        return well_deviation(self.phi, self.params.alpha)

    @property
    def degree(self) -> float:
        return (self.ell_plus - self.ell_minus) / (2 * math.pi)

    def with_phi(self, phi: np.ndarray) -> "Profile":
        return make_profile(self.grid, self.params, phi, self.ell_minus, self.ell_plus)


def well_deviation(phi: np.ndarray, alpha: float) -> np.ndarray:
    """``cos(phi) - cos(alpha)`` via the product formula (accurate near wells)."""
    return -2.0 * np.sin(0.5 * (phi + alpha)) * np.sin(0.5 * (phi - alpha))


def make_profile(grid: Grid, params: AnisotropyParams, phi_values, ell_minus: float,
                 ell_plus: float) -> Profile:
    """Validate and build a Profile; the end values are overwritten by the limits."""
    phi = np.array(phi_values, dtype=float, copy=True)
    if phi.ndim != 1 or phi.shape[0] != grid.n_points:
        raise ProfileError(f"phi has shape {phi.shape}, expected ({grid.n_points},)")
    for name, val in (("ell_minus", ell_minus), ("ell_plus", ell_plus)):
        if not params.is_well_phase(float(val)):
            raise ProfileError(f"inadmissible limit {name}={val} for h={params.h}")
    if not np.all(np.isfinite(phi)):
        raise ProfileError("phi contains non-finite values")
    phi[0] = ell_minus
    phi[-1] = ell_plus
    phi.setflags(write=False)
    return Profile(grid, params, phi, float(ell_minus), float(ell_plus))


def degree(p: Profile) -> float:
    """Winding number ``(ell_plus - ell_minus) / (2 pi)``."""
    return p.degree


def degree_by_quadrature(p: Profile) -> float:
    """Trapezoid integral of ``phi'/(2 pi)``; agrees with :func:`degree` because the
    ends are pinned."""
    dphi = np.diff(p.phi)
    return float(np.sum(dphi) / (2 * math.pi))


def constant_profile(grid: Grid, params: AnisotropyParams, phase: float | None = None) -> Profile:
    phase = -params.alpha if phase is None else phase
    return make_profile(grid, params, np.full(grid.n_points, phase), phase, phase)


def wall_layout(params: AnisotropyParams, d: float) -> tuple[float, np.ndarray]:
    """Starting lift and the successive phase jumps of the walls of degree ``d``.

    Walls run between consecutive well phases, so for ``h < 1`` they alternate
    between jumps of ``2*alpha`` and ``2*pi - 2*alpha``; for ``h > 1`` every wall
    is a ``2*pi`` turn.
    """
    ell_minus, ell_plus = limits_for_degree(params, d)
    wells = params.well_phases(min(ell_minus, ell_plus), max(ell_minus, ell_plus))
    steps = np.diff(wells)
    if ell_plus < ell_minus:
        steps = -steps[::-1]
    return ell_minus, steps


def initial_guess(grid: Grid, params: AnisotropyParams, d: float, style: str = "linear_ramp",
                  centers: Sequence[float] | None = None,
                  widths: Sequence[float] | float | None = None) -> Profile:
    """Starting profile of winding number ``d``.

    ``linear_ramp`` interpolates the limits affinely; ``stacked_walls`` sums
    arctan steps at ``centers``.  With ``stacked_walls`` every center carries
    one wall (one jump between consecutive wells); if fewer centers than walls
    are given, the walls are spread evenly over the middle half of the domain.
    """
    ell_minus, ell_plus = limits_for_degree(params, d)
    x = grid.x
    L = grid.half_length
    if style == "linear_ramp":
        phi = ell_minus + (ell_plus - ell_minus) * (x + L) / (2 * L)
    elif style == "stacked_walls":
        _, steps = wall_layout(params, d)
        nw = len(steps)
        if centers is None or len(centers) != nw:
            centers = np.linspace(-L / 4, L / 4, nw) if nw > 1 else np.zeros(nw)
        if widths is None:
            widths = np.ones(nw)
        widths = np.broadcast_to(np.asarray(widths, dtype=float), (nw,))
        phi = np.full_like(x, ell_minus)
        for c, w, s in zip(centers, widths, steps):
            # normalized so the step is exact at the pinned ends
            lo = np.arctan((-L - c) / w)
            hi = np.arctan((L - c) / w)
            phi = phi + s * (np.arctan((x - c) / w) - lo) / (hi - lo)
    else:
        raise ValueError(f"unknown initial guess style {style!r}")
    return make_profile(grid, params, phi, ell_minus, ell_plus)


def resample(p: Profile, new_grid: Grid) -> Profile:
    """Linear interpolation onto ``new_grid``; constant continuation outside the
    old domain.  Shrinking the domain is rejected."""
    if new_grid.half_length < p.grid.half_length - 1e-12:
        raise ProfileError("resample cannot shrink the domain; use constructions.localize")
    if new_grid == p.grid:
        return p
    phi = np.interp(new_grid.x, p.x, p.phi, left=p.ell_minus, right=p.ell_plus)
    return make_profile(new_grid, p.params, phi, p.ell_minus, p.ell_plus)


def remap_phase(phi: np.ndarray, alpha_old: float, alpha_new: float) -> np.ndarray:
    """Piecewise-linear phase map sending ``2*pi*j +- alpha_old`` to
    ``2*pi*j +- alpha_new`` and fixing ``pi*Z``; used to warm-start across ``h``."""
    if alpha_old == alpha_new:
        return np.array(phi, dtype=float)
    j = np.floor(phi / (2 * math.pi))
    t = phi - 2 * math.pi * j
    knots_old = [0.0, alpha_old, math.pi, 2 * math.pi - alpha_old, 2 * math.pi]
    knots_new = [0.0, alpha_new, math.pi, 2 * math.pi - alpha_new, 2 * math.pi]
    return 2 * math.pi * j + np.interp(t, knots_old, knots_new)


# --------------------------------------------------------------------- files

def _fmt(v: float) -> str:
    if not math.isfinite(v):
        raise ProfileError(f"cannot serialize non-finite value {v}")
    return format(float(v), ".17g")


def profile_to_json(p: Profile) -> str:
    phi = ", ".join(_fmt(v) for v in p.phi)
    return (
        f'{{"version": {FORMAT_VERSION}, "h": {_fmt(p.params.h)}, '
        f'"L": {_fmt(p.grid.half_length)}, "N": {p.grid.n_points}, '
        f'"ell_minus": {_fmt(p.ell_minus)}, "ell_plus": {_fmt(p.ell_plus)}, '
        f'"phi": [{phi}]}}\n'
    )


def profile_from_json(text: str) -> Profile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProfileFormatError(f"malformed profile file: {exc}") from exc
    if not isinstance(data, dict):
        raise ProfileFormatError("profile file must contain a JSON object")
    if data.get("version") != FORMAT_VERSION:
        raise ProfileFormatError(f"unsupported profile version {data.get('version')!r}")
    missing = {"h", "L", "N", "ell_minus", "ell_plus", "phi"} - data.keys()
    if missing:
        raise ProfileFormatError(f"profile file lacks keys {sorted(missing)}")
    phi = data["phi"]
    if not isinstance(phi, list) or len(phi) != data["N"]:
        raise ProfileFormatError(
            f"header N={data['N']} does not match {len(phi) if isinstance(phi, list) else '?'} "
            "phi values")
    try:
        grid = Grid(data["L"], data["N"])
        params = AnisotropyParams(data["h"])
        return make_profile(grid, params, np.asarray(phi, dtype=float),
                            data["ell_minus"], data["ell_plus"])
    except (TypeError, ValueError) as exc:
        raise ProfileFormatError(str(exc)) from exc


def write_profile(p: Profile, path) -> None:
    Path(path).write_text(profile_to_json(p), encoding="utf-8", newline="\n")


def read_profile(path) -> Profile:
    return profile_from_json(Path(path).read_text(encoding="utf-8"))


def write_csv(path, x: np.ndarray, values: np.ndarray, name: str = "phi") -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["x", name])
        for a, b in zip(x, values):
            w.writerow([_fmt(a), _fmt(b)])


def read_csv(path) -> tuple[np.ndarray, np.ndarray, str]:
    """Read a two-column CSV with a mandatory header row; returns (x, values, name)."""
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or len(rows[0]) != 2 or rows[0][0].strip() != "x":
        raise ProfileFormatError("CSV must start with a header row 'x,<name>'")
    try:
        body = np.array([[float(a), float(b)] for a, b in rows[1:]], dtype=float)
    except ValueError as exc:
        raise ProfileFormatError(f"malformed CSV row: {exc}") from exc
    if body.shape[0] < 2:
        raise ProfileFormatError("CSV has no data rows")
    return body[:, 0], body[:, 1], rows[0][1].strip()


def grid_from_nodes(x: np.ndarray) -> Grid:
    """Recover the Grid from node coordinates, checking uniformity and symmetry."""
    x = np.asarray(x, dtype=float)
    grid = Grid(0.5 * (x[-1] - x[0]), len(x))
    if not np.allclose(x, grid.x, rtol=0, atol=1e-9 * max(1.0, grid.half_length)):
        raise ProfileFormatError("nodes are not a uniform grid symmetric about 0")
    return grid


__all__ = [
    "AnisotropyParams", "Grid", "Profile", "ProfileError", "ProfileFormatError",
    "constant_profile", "degree", "degree_by_quadrature", "grid_from_nodes", "initial_guess",
    "limits_for_degree", "make_profile", "profile_from_json", "profile_to_json", "read_csv",
    "read_profile", "remap_phase", "resample", "split_degree", "wall_layout", "well_deviation",
    "write_csv", "write_profile",
]
