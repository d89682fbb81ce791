"""Anisotropy potential W in the phase variable and its quadratic-growth bound."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from .profile import AnisotropyParams

# Largest feasible value found by a brute-force scan over phi in [-pi, pi] and
# alpha in (0, pi/2] is ~0.0955 (attained at alpha = pi/2, phi = +-pi).
GAMMA = 0.09


class PotentialEval(NamedTuple):
    w: float | np.ndarray
    dw_dphi: float | np.ndarray


def potential(params: AnisotropyParams, phi):
    """W(phi) and dW/dphi.

    ``W = (cos^2 phi - 2 h cos phi + 2 h k - k^2) / 2``, written as a sum of
    nonnegative terms so that it is exactly zero at the wells::

        W = (cos phi - k)^2 / 2 + (h - k)(1 - cos phi)

    ``dW/dphi = (h - cos phi) sin phi`` in both regimes.
    """
    phi = np.asarray(phi, dtype=float)
    dev = -2.0 * np.sin(0.5 * (phi + params.alpha)) * np.sin(0.5 * (phi - params.alpha))
    w = 0.5 * dev * dev
    if params.h > 1.0:
        w = w + (params.h - 1.0) * 2.0 * np.sin(0.5 * phi) ** 2
    dw = (params.h - np.cos(phi)) * np.sin(phi)
    if w.ndim == 0:
        return PotentialEval(float(w), float(dw))
    return PotentialEval(w, dw)


def w_value(params: AnisotropyParams, phi):
    return potential(params, phi).w


def w_second(params: AnisotropyParams, phi):
    """d^2W/dphi^2 = sin^2 phi + (h - cos phi) cos phi."""
    phi = np.asarray(phi, dtype=float)
    c = np.cos(phi)
    return np.sin(phi) ** 2 + (params.h - c) * c


def gamma_lower_bound(params: AnisotropyParams, phi, gamma: float = GAMMA):
    """Right-hand side of the quadratic-growth bound at ``phi``."""
    phi = np.asarray(phi, dtype=float)
    if params.h > 1.0:
        return (params.h - 1.0) * gamma ** 2 * phi ** 2
    return gamma ** 2 * (phi ** 2 - params.alpha ** 2) ** 2


def gamma_lower_bound_check(params: AnisotropyParams, phi, gamma: float = GAMMA,
                            slack: float = 1e-15):
    """Whether ``W(phi) >= gamma^2 (phi^2 - alpha^2)^2`` (``h < 1``) or
    ``W(phi) >= (h - 1) gamma^2 phi^2`` (``h > 1``) holds; ``phi`` must lie in
    ``[-pi, pi]``."""
    arr = np.asarray(phi, dtype=float)
    if np.any(np.abs(arr) > math.pi + 1e-12):
        raise ValueError("phi must lie in [-pi, pi]")
    ok = w_value(params, arr) + slack >= gamma_lower_bound(params, arr, gamma)
    return bool(ok) if np.ndim(ok) == 0 else ok


def largest_feasible_gamma(alphas, phi_step: float = 1e-3) -> float:
    """Brute-force the largest gamma that satisfies the ``h < 1`` bound on a scan."""
    phi = np.arange(-math.pi, math.pi + 0.5 * phi_step, phi_step)
    best = math.inf
    for a in alphas:
        w = 0.5 * (np.cos(phi) - math.cos(a)) ** 2
        den = (phi ** 2 - a ** 2) ** 2
        mask = den > 1e-14
        best = min(best, float(np.min(w[mask] / den[mask])))
    return math.sqrt(best)
