"""Nonlocal calculus on the line: the Dirichlet-to-Neumann operator ``Lambda``
(the negative half-Laplacian), ``H^{1/2}`` seminorms and inner products, and the
harmonic extension to the upper half-plane.

Every quantity has at least two independent discretizations:

* spectral: the band-limited kernel of ``-|xi|`` applied by FFT with a
  free-space (non-periodic) embedding, so the zero extension of ``f`` outside
  ``[-L, L]`` is honoured exactly and periodic images never interact;
* real space: midpoint quadrature of the principal-value / Gagliardo integrals
  with an explicit diagonal correction and closed-form constant tails;
* PDE: a 5-point finite-difference Dirichlet problem in a box (stray energy only).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import fft as sfft
from scipy.linalg import matmul_toeplitz, toeplitz

from .profile import Grid


class PoorDecayWarning(UserWarning):
    """Input does not decay at the ends of the grid; zero extension is inaccurate."""


def _check_decay(f: np.ndarray, rel: float = 1e-6) -> None:
    scale = np.max(np.abs(f))
    if scale > 0 and max(abs(f[0]), abs(f[-1])) > rel * scale:
        warnings.warn("input does not decay at the grid ends", PoorDecayWarning, stacklevel=3)


def bandlimited_kernel(n_points: int, dx: float) -> np.ndarray:
    """First row ``K(0..N-1)`` of the discrete ``Lambda`` for band-limited data.

    ``K(0) = -pi/(2 dx)``, ``K(n) = 2/(pi n^2 dx)`` for odd ``n`` and 0 for even
    ``n != 0``; this is ``(dx/2pi) * int_{|xi|<pi/dx} -|xi| e^{i xi n dx} dxi``.
    """
    n = np.arange(n_points, dtype=float)
    k = np.zeros(n_points)
    odd = (np.arange(n_points) % 2) == 1
    k[odd] = 2.0 / (math.pi * n[odd] ** 2 * dx)
    k[0] = -math.pi / (2.0 * dx)
    return k


@dataclass(frozen=True, eq=False)
class SpectralPlan:
    """Padded FFT layout for ``base_grid``.

    ``M >= pad_factor * N`` (rounded up to a fast FFT size).  ``xi`` and
    ``abs_xi`` describe the periodic ring of length ``M*dx``; ``kernel_hat`` is
    the transform of the free-space kernel embedded in that ring.
    """

    base_grid: Grid
    pad_factor: int = 4

    def __post_init__(self):
        if int(self.pad_factor) != self.pad_factor or self.pad_factor < 2:
            raise ValueError("pad_factor must be an integer >= 2")

    @property
    def N(self) -> int:
        return self.base_grid.n_points

    @property
    def dx(self) -> float:
        return self.base_grid.dx

    @cached_property
    def M(self) -> int:
        return sfft.next_fast_len(self.pad_factor * self.N, real=True)

    @cached_property
    def xi(self) -> np.ndarray:
        return 2.0 * math.pi * np.fft.fftfreq(self.M, d=self.dx)

    @cached_property
    def abs_xi(self) -> np.ndarray:
        return np.abs(self.xi)

    @cached_property
    def kernel_row(self) -> np.ndarray:
        return bandlimited_kernel(self.N, self.dx)

    @cached_property
    def kernel_hat(self) -> np.ndarray:
        col = np.zeros(self.M)
        k = self.kernel_row
        col[: self.N] = k
        col[self.M - self.N + 1:] = k[1:][::-1]
        return sfft.rfft(col)

    def poisson_multiplier(self, x2: float) -> np.ndarray:
        """``exp(-|xi| x2)`` on the half spectrum of the ring."""
        return np.exp(-np.abs(self.xi[: self.M // 2 + 1]) * x2)

    @cached_property
    def dense(self) -> np.ndarray:
        m = toeplitz(self.kernel_row)
        m.setflags(write=False)
        return m

    def matrix(self) -> np.ndarray:
        """Dense ``N x N`` matrix of the spectral ``Lambda`` (symmetric Toeplitz, cached)."""
        return self.dense

    def check_grid(self, grid: Grid) -> None:
        if grid != self.base_grid:
            raise ValueError(f"plan built for {self.base_grid}, got {grid}")


def lambda_fourier(plan: SpectralPlan, f) -> np.ndarray:
    """``Lambda f`` on the base grid via the zero-padded spectral route."""
    f = np.asarray(f, dtype=float)
    if f.shape[-1] != plan.N:
        raise ValueError(f"expected {plan.N} samples, got {f.shape[-1]}")
    if f.ndim == 1:
        _check_decay(f)
    fh = sfft.rfft(f, n=plan.M, axis=-1)
    return sfft.irfft(fh * plan.kernel_hat, n=plan.M, axis=-1)[..., : plan.N]


def lambda_ring(f, dx: float) -> np.ndarray:
    """``Lambda`` on a periodic ring: the bare multiplier ``-|xi|`` (no padding)."""
    f = np.asarray(f, dtype=float)
    xi = 2.0 * math.pi * np.fft.rfftfreq(f.shape[-1], d=dx)
    return sfft.irfft(-xi * sfft.rfft(f), n=f.shape[-1])


def _pv_weights(n_points: int, dx: float) -> tuple[np.ndarray, np.ndarray]:
    """Off-diagonal kernel ``1/(pi n^2 dx)`` and its row sums over the grid."""
    n = np.arange(n_points, dtype=float)
    k = np.zeros(n_points)
    k[1:] = 1.0 / (math.pi * n[1:] ** 2 * dx)
    c = np.cumsum(k)
    idx = np.arange(n_points)
    rowsum = c[idx] + c[n_points - 1 - idx]
    return k, rowsum


def _second_difference_extended(f: np.ndarray, dx: float) -> np.ndarray:
    fe = np.concatenate([[f[0]], f, [f[-1]]])
    return (fe[2:] - 2.0 * fe[1:-1] + fe[:-2]) / dx ** 2


def lambda_pv(f, grid: Grid) -> np.ndarray:
    """``Lambda f(x) = (1/pi) PV int (f(t) - f(x)) / (t - x)^2 dt`` by quadrature.

    Midpoint rule over the cells ``|t - x| >= dx/2``; the excluded cell adds
    ``f''(x) dx / (2 pi)`` to leading order; beyond ``+-(L + dx/2)`` the input
    is continued by ``f(+-L)`` and those tails are integrated in closed form.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (grid.n_points,):
        raise ValueError(f"expected {grid.n_points} samples, got {f.shape}")
    _check_decay(f)
    dx = grid.dx
    k, rowsum = _pv_weights(grid.n_points, dx)
    out = matmul_toeplitz(k, f) - rowsum * f
    out += _second_difference_extended(f, dx) * dx / (2.0 * math.pi)
    x = grid.x
    edge = grid.half_length + 0.5 * dx
    out += (f[-1] - f) / (math.pi * (edge - x))
    out += (f[0] - f) / (math.pi * (edge + x))
    return out


def h_half_norm_sq(plan: SpectralPlan, f) -> float:
    """Squared homogeneous ``H^{1/2}`` seminorm ``int |xi| |F f|^2 dxi``."""
    f = np.asarray(f, dtype=float)
    return float(-plan.dx * np.dot(f, lambda_fourier(plan, f)))


def h_half_inner(plan: SpectralPlan, f, g, route: str = "spectral") -> float:
    """``<f, g>`` in ``H^{1/2}``.

    ``route="spectral"`` uses polarization of :func:`h_half_norm_sq`;
    ``route="gagliardo"`` sums ``(1/2pi) iint (f(s)-f(t))(g(s)-g(t))/(s-t)^2``
    with the same diagonal and tail rules as :func:`lambda_pv`.
    """
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if route == "spectral":
        return 0.25 * (h_half_norm_sq(plan, f + g) - h_half_norm_sq(plan, f - g))
    if route == "gagliardo":
        return gagliardo_inner(f, g, plan.base_grid)
    raise ValueError(f"unknown route {route!r}")


def gagliardo_inner(f, g, grid: Grid) -> float:
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    dx = grid.dx
    k, rowsum = _pv_weights(grid.n_points, dx)
    # (1/2pi) sum_{i != j} (f_i - f_j)(g_i - g_j) dx^2/(x_i - x_j)^2, expanded
    off = np.dot(f * g, rowsum) - np.dot(g, matmul_toeplitz(k, f))
    total = off * dx
    # cells |s - t| < dx/2: (f(s)-f(t))(g(s)-g(t)) ~ f' g' (s-t)^2
    fe = np.concatenate([[f[0]], f, [f[-1]]])
    ge = np.concatenate([[g[0]], g, [g[-1]]])
    fp = (fe[2:] - fe[:-2]) / (2 * dx)
    gp = (ge[2:] - ge[:-2]) / (2 * dx)
    total += np.dot(fp, gp) * dx * dx / (2.0 * math.pi)
    x = grid.x
    edge = grid.half_length + 0.5 * dx
    total += np.dot((f - f[-1]) * (g - g[-1]), dx / (edge - x)) / math.pi
    total += np.dot((f - f[0]) * (g - g[0]), dx / (edge + x)) / math.pi
    return float(total)


@dataclass(frozen=True, eq=False)
class HalfPlaneField:
    """Values of a harmonic function at ``x1`` (rows of ``values`` follow ``x2``)."""

    x1: np.ndarray
    x2: np.ndarray
    values: np.ndarray


def harmonic_extension_V(f, grid: Grid, x2_levels, chunk: int = 256) -> HalfPlaneField:
    """Poisson integral ``V(x1, x2) = (x2/pi) int f(t) / ((t-x1)^2 + x2^2) dt``.

    ``f`` is taken piecewise linear between nodes and the kernel is integrated
    exactly on every cell, so the formula stays accurate as ``x2 -> 0``.
    Beyond the grid ``f`` is continued by ``f(+-L)``.
    """
    f = np.asarray(f, dtype=float)
    x2_levels = np.atleast_1d(np.asarray(x2_levels, dtype=float))
    if np.any(x2_levels <= 0) or np.any(np.diff(x2_levels) <= 0):
        raise ValueError("x2_levels must be positive and ascending")
    t = grid.x
    x1 = grid.x
    slope = np.diff(f) / grid.dx
    values = np.empty((len(x2_levels), len(x1)))
    for lev, y in enumerate(x2_levels):
        for lo in range(0, len(x1), chunk):
            xs = x1[lo: lo + chunk, None]
            d = t[None, :] - xs
            A = np.arctan(d / y) / math.pi
            B = (y / (2.0 * math.pi)) * np.log(d * d + y * y)
            dA = np.diff(A, axis=1)
            dB = np.diff(B, axis=1)
            base = f[None, :-1] + slope[None, :] * (xs - t[None, :-1])
            v = np.sum(base * dA + slope[None, :] * dB, axis=1)
            # constant tails
            v += f[-1] * (0.5 - A[:, -1]) + f[0] * (A[:, 0] + 0.5)
            values[lev, lo: lo + chunk] = v
    return HalfPlaneField(x1.copy(), x2_levels, values)


def harmonic_extension_V_fourier(plan: SpectralPlan, f, x2_levels) -> HalfPlaneField:
    """Spectral counterpart of :func:`harmonic_extension_V` (ring multiplier
    ``exp(-|xi| x2)``; periodic images make it a rough check only)."""
    f = np.asarray(f, dtype=float)
    x2_levels = np.atleast_1d(np.asarray(x2_levels, dtype=float))
    fh = sfft.rfft(f, n=plan.M)
    vals = np.array([sfft.irfft(fh * plan.poisson_multiplier(y), n=plan.M)[: plan.N]
                     for y in x2_levels])
    return HalfPlaneField(plan.base_grid.x.copy(), x2_levels, vals)


def stray_energy_pde(f, grid: Grid, strip_height: float, nx2: int,
                     nx1: int | None = None) -> float:
    """Dirichlet energy ``int |grad v|^2`` of the 5-point discrete harmonic ``v``
    on ``[-L, L] x [0, H]`` with ``v = f`` on the bottom and ``v = 0`` elsewhere.

    The discrete problem is solved exactly: a sine transform in ``x1`` decouples
    the modes and each mode's recurrence in ``x2`` is solved in closed form.
    ``nx1`` defaults to the value giving square cells.
    """
    L = grid.half_length
    H = float(strip_height)
    if H < 0.5 * L:
        raise ValueError("strip height must be at least L/2")
    if nx2 < 3:
        raise ValueError("nx2 must be >= 3")
    hy = H / (nx2 - 1)
    if nx1 is None:
        nx1 = int(round(2 * L / hy)) + 1
    hx = 2 * L / (nx1 - 1)
    xs = np.linspace(-L, L, nx1)
    fb = np.interp(xs, grid.x, np.asarray(f, dtype=float))
    fb[0] = fb[-1] = 0.0
    if not np.any(fb):
        return 0.0
    n = nx1 - 2
    kk = np.arange(1, n + 1)
    lam = (2.0 - 2.0 * np.cos(math.pi * kk / (nx1 - 1))) / hx ** 2
    mu = np.arccosh(1.0 + 0.5 * lam * hy ** 2)
    fh = sfft.dst(fb[1:-1], type=1)
    J = nx2 - 1
    j = np.arange(nx2)[:, None]
    # sinh(mu (J - j)) / sinh(mu J), written to avoid overflow
    prof = np.exp(-mu[None, :] * j) * (-np.expm1(-2.0 * mu[None, :] * (J - j))) \
        / (-np.expm1(-2.0 * mu[None, :] * J))
    v = np.zeros((nx2, nx1))
    v[:, 1:-1] = sfft.idst(prof * fh[None, :], type=1, axis=1)
    v[0, 1:-1] = fb[1:-1]
    gx = np.diff(v, axis=1)
    gy = np.diff(v, axis=0)
    wx = np.ones(nx2)
    wx[0] = wx[-1] = 0.5
    wy = np.ones(nx1)
    wy[0] = wy[-1] = 0.5
    return float(np.sum(wx[:, None] * gx ** 2) * hy / hx
                 + np.sum(wy[None, :] * gy ** 2) * hx / hy)


def smooth_corpus(grid: Grid, n: int = 20, seed: int = 42) -> np.ndarray:
    """``n`` random smooth decaying test functions (rows): sums of two to four
    Gaussian and ``sech^2`` bumps with centers in ``[-L/5, L/5]``."""
    rng = np.random.default_rng(seed)
    x = grid.x
    span = grid.half_length / 5
    out = np.zeros((n, grid.n_points))
    for i in range(n):
        for _ in range(rng.integers(2, 5)):
            c = rng.uniform(-span, span)
            w = rng.uniform(0.7, 3.0)
            a = rng.uniform(-1.0, 1.0)
            if rng.random() < 0.5:
                out[i] += a * np.exp(-((x - c) / w) ** 2)
            else:
                out[i] += a / np.cosh((x - c) / w) ** 2
    return out
