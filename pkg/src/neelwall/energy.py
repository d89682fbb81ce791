"""The wall energy ``E_h``, its Euler-Lagrange residual and second variation.

Discretization (chosen so that the residual is the exact discrete gradient):

* exchange ``(1/2) sum_cells ((phi_{i+1} - phi_i)/dx)^2 dx``;
* anisotropy: trapezoid rule of ``W(phi)``;
* stray: ``-(dx/2) sum f (Lambda f)`` with the spectral ``Lambda``.

Then ``dE/dphi_i = dx * r_i`` at interior nodes, with
``r = -phi'' + (h - cos phi + Lambda f) sin phi`` and the 3-point ``phi''``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .anisotropy import potential, w_second
from .halfline import SpectralPlan, lambda_fourier
from .profile import AnisotropyParams, Profile


@dataclass(frozen=True)
class EnergyBreakdown:
    exchange: float
    aniso: float
    stray: float
    total: float

    @classmethod
    def from_parts(cls, exchange: float, aniso: float, stray: float) -> "EnergyBreakdown":
        return cls(float(exchange), float(aniso), float(stray),
                   float(exchange + aniso + stray))

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "EnergyBreakdown":
        d = json.loads(text)
        return cls(float(d["exchange"]), float(d["aniso"]), float(d["stray"]), float(d["total"]))


def _trapz_weights(n: int, dx: float) -> np.ndarray:
    w = np.full(n, dx)
    w[0] = w[-1] = 0.5 * dx
    return w


def exchange_energy(phi: np.ndarray, dx: float) -> float:
    d = np.diff(phi)
    return float(0.5 * np.dot(d, d) / dx)


def aniso_energy(params: AnisotropyParams, phi: np.ndarray, dx: float) -> float:
    w = potential(params, phi).w
    return float(np.dot(_trapz_weights(len(phi), dx), w))


def _state(plan: SpectralPlan, p: Profile):
    plan.check_grid(p.grid)
    f = p.f
    lf = lambda_fourier(plan, f)
    return f, lf


def energy(plan: SpectralPlan, params: AnisotropyParams, p: Profile) -> EnergyBreakdown:
    """Exchange, anisotropy and stray parts of ``E_h(p)``."""
    if params != p.params:
        raise ValueError("params do not match the profile")
    f, lf = _state(plan, p)
    dx = p.grid.dx
    stray = max(-0.5 * dx * float(np.dot(f, lf)), 0.0)
    e = EnergyBreakdown.from_parts(exchange_energy(p.phi, dx), aniso_energy(params, p.phi, dx),
                                   stray)
    if not math.isfinite(e.total):
        raise FloatingPointError("non-finite energy")
    return e


def energy_and_residual(plan: SpectralPlan, params: AnisotropyParams, phi: np.ndarray,
                        dx: float) -> tuple[float, np.ndarray]:
    """Total energy and residual for a raw phase array (endpoints taken as pinned)."""
    f = -2.0 * np.sin(0.5 * (phi + params.alpha)) * np.sin(0.5 * (phi - params.alpha))
    lf = lambda_fourier(plan, f)
    pe = potential(params, phi)
    total = (exchange_energy(phi, dx) + float(np.dot(_trapz_weights(len(phi), dx), pe.w))
             - 0.5 * dx * float(np.dot(f, lf)))
    r = np.zeros_like(phi)
    r[1:-1] = (-(phi[2:] - 2.0 * phi[1:-1] + phi[:-2]) / dx ** 2
               + pe.dw_dphi[1:-1] + np.sin(phi[1:-1]) * lf[1:-1])
    return total, r


def el_residual(plan: SpectralPlan, params: AnisotropyParams, p: Profile) -> np.ndarray:
    """Euler-Lagrange residual ``-phi'' + (h - cos phi + Lambda f) sin phi``.

    Returned on the full grid with zeros at the two pinned end nodes.
    """
    plan.check_grid(p.grid)
    return energy_and_residual(plan, params, p.phi, p.grid.dx)[1]


def residual_max(plan: SpectralPlan, params: AnisotropyParams, p: Profile) -> float:
    return float(np.max(np.abs(el_residual(plan, params, p))))


def hessian_diagonal_part(plan: SpectralPlan, params: AnisotropyParams,
                          phi: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pieces of the second variation: ``a = W'' + cos(phi) Lambda f`` and ``sin phi``.

    The Hessian (divided by ``dx``) is ``-D2 + diag(a) - diag(s) Lambda diag(s)``.
    """
    f = -2.0 * np.sin(0.5 * (phi + params.alpha)) * np.sin(0.5 * (phi - params.alpha))
    lf = lambda_fourier(plan, f)
    return w_second(params, phi) + np.cos(phi) * lf, np.sin(phi)


def hessian_vector(plan: SpectralPlan, params: AnisotropyParams, phi: np.ndarray,
                   v: np.ndarray, dx: float) -> np.ndarray:
    """Second variation applied to ``v`` (interior-supported; ends return 0)."""
    a, s = hessian_diagonal_part(plan, params, phi)
    v = np.array(v, dtype=float)
    v[0] = v[-1] = 0.0
    out = a * v - s * lambda_fourier(plan, s * v)
    out[1:-1] += -(v[2:] - 2.0 * v[1:-1] + v[:-2]) / dx ** 2
    out[0] = out[-1] = 0.0
    return out


# ----------------------------------------------------------------- m1 form

TRANSVERSAL_TOL = 1e-8


def _deriv4(u: np.ndarray, dx: float) -> np.ndarray:
    """Fourth-order centered first derivative (second order at the two ends)."""
    d = np.gradient(u, dx, edge_order=2)
    if len(u) >= 5:
        d[2:-2] = (-u[4:] + 8.0 * u[3:-1] - 8.0 * u[1:-3] + u[:-4]) / (12.0 * dx)
    return d


def _segment(p: Profile, segment) -> slice:
    if segment is None:
        return slice(0, p.grid.n_points)
    i0, i1 = segment
    if not (0 <= i0 < i1 <= p.grid.n_points) or i1 - i0 < 5:
        raise ValueError("segment must be an index range of at least 5 nodes")
    return slice(i0, i1)


def exchange_phi_form(p: Profile, segment=None) -> float:
    """``(1/2) int phi'^2`` over an index range, with the high-order stencil used by
    :func:`energy_m1_form` (so the two forms are directly comparable)."""
    sl = _segment(p, segment)
    dphi = _deriv4(p.phi[sl], p.grid.dx)
    return float(0.5 * np.trapezoid(dphi ** 2, dx=p.grid.dx))


def energy_m1_form(plan: SpectralPlan, params: AnisotropyParams, p: Profile,
                   segment=None) -> EnergyBreakdown:
    """Energy written through ``m1 = cos phi`` only.

    Exchange is ``(1/2) int (m1')^2 / (1 - m1^2)``, anisotropy
    ``(1/2) int (m1^2 - 2 h m1 + 2 h k - k^2)``; stray as in :func:`energy`.
    With ``segment=(i0, i1)`` the local terms are restricted to those nodes.
    Raises ``ValueError`` if ``|m1| >= 1 - 1e-8`` at an interior node of the range.
    """
    plan.check_grid(p.grid)
    sl = _segment(p, segment)
    dx = p.grid.dx
    m1 = p.m1[sl]
    if np.any(np.abs(m1[1:-1]) >= 1.0 - TRANSVERSAL_TOL):
        raise ValueError("profile passes through +-1")
    dm1 = _deriv4(m1, dx)
    den = 1.0 - m1 ** 2
    dens = np.where(den > 0, den, np.inf)
    integrand = dm1 ** 2 / dens
    exch = 0.5 * float(np.trapezoid(integrand, dx=dx))
    k, h = params.k, params.h
    w = 0.5 * (m1 ** 2 - 2 * h * m1 + 2 * h * k - k ** 2)
    aniso = float(np.trapezoid(w, dx=dx))
    f = p.f
    stray = max(-0.5 * dx * float(np.dot(f, lambda_fourier(plan, f))), 0.0)
    return EnergyBreakdown.from_parts(exch, aniso, stray)
