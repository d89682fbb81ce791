"""Fundamental solution of the linearized operator ``L = -d^2/dx^2 + 1 - sin(alpha) Lambda``.

``G`` has Fourier multiplier ``1/(xi^2 + 1 + |xi| sin(alpha))`` and, for ``x != 0``,
the real-integral form

    G(x) = (sin a / pi) int_0^inf t exp(-t|x|) / (t^2 sin^2 a + (t^2 - 1)^2) dt.

``G'`` and the diffuse part of ``G''`` use the weights ``-sign(x) t^2`` and ``t^3``.
"""

from __future__ import annotations

import math
import warnings
from typing import NamedTuple

import numpy as np
from scipy import fft as sfft
from scipy.integrate import IntegrationWarning, quad

from .halfline import lambda_fourier, SpectralPlan
from .profile import Grid

ABS_TOL = 1e-8

# Certified envelope constants.  Largest ratios found on alpha in [0.02, pi/2],
# |x| in [1e-3, 60]: 0.49, 0.65, 1.94; rounded up with a safety factor of ~1.5.
C_G = 1.0
C_G1 = 1.0
C_G2 = 3.0
# ||G||_{H^1}^2 = (1/2pi) int (1 + xi^2) / (xi^2 + 1 + |xi| sin a)^2 <= 1/2
C_H1 = 1.0 / math.sqrt(2.0)


class GreenEval(NamedTuple):
    x1: float
    g: float
    g1: float
    g2: float


class QuadratureError(RuntimeError):
    pass


def _check_alpha(alpha: float) -> float:
    if not 0.0 < alpha <= math.pi / 2 + 1e-15:
        raise ValueError("alpha must lie in (0, pi/2]")
    return math.sin(alpha)


def _moment(alpha: float, x: float, power: int, tol: float = 1e-12) -> float:
    """``(sin a/pi) int_0^inf t^power e^{-t|x|} / (t^2 sin^2 a + (t^2 - 1)^2) dt``."""
    s = _check_alpha(alpha)
    ax = abs(x)

    def integrand(t):
        return t ** power * math.exp(-t * ax) / (t * t * s * s + (t * t - 1.0) ** 2)

    pts = sorted({0.0, max(1.0 - s, 0.0), 1.0, 1.0 + s})
    total = 0.0
    err = 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", IntegrationWarning)
        try:
            for a, b in zip(pts[:-1], pts[1:]):
                if b > a:
                    v, e = quad(integrand, a, b, epsabs=tol, epsrel=1e-12, limit=400)
                    total += v
                    err += e
            v, e = quad(integrand, pts[-1], math.inf, epsabs=tol, epsrel=1e-12, limit=400)
        except IntegrationWarning as exc:
            raise QuadratureError(f"quadrature failed at alpha={alpha}, x={x}: {exc}") from exc
    total += v
    err += e
    val = s / math.pi * total
    if s / math.pi * err > ABS_TOL:
        raise QuadratureError(f"quadrature error estimate {err:.2e} above target")
    return val


def green_eval(alpha: float, x1: float) -> GreenEval:
    """``G``, ``G'`` and the diffuse part of ``G''`` at ``x1 != 0``."""
    if x1 == 0:
        raise ValueError("x1 must be nonzero (G' jumps and G'' is singular at 0)")
    g = _moment(alpha, x1, 1)
    g1 = -math.copysign(1.0, x1) * _moment(alpha, x1, 2)
    g2 = _moment(alpha, x1, 3)
    return GreenEval(float(x1), g, g1, g2)


def green_at_zero(alpha: float) -> float:
    """``G(0)`` (``G`` is continuous at the origin)."""
    return _moment(alpha, 0.0, 1)


def green_at_zero_closed_form_half_pi() -> float:
    """``G(0)`` for ``alpha = pi/2``: ``(1/2pi) int_0^inf du/(u^2 - u + 1) = 2/(3 sqrt 3)``."""
    return 2.0 / (3.0 * math.sqrt(3.0))


def multiplier(alpha: float, xi) -> np.ndarray:
    s = _check_alpha(alpha)
    xi = np.asarray(xi, dtype=float)
    return 1.0 / (xi * xi + 1.0 + np.abs(xi) * s)


def fourier_transform_sampled(alpha: float, xi: float) -> float:
    """``F G(xi) = (2/sqrt(2 pi)) int_0^inf G(x) cos(xi x) dx`` by quadrature of the
    pointwise-evaluated ``G`` (a route independent of the multiplier formula)."""
    g = lambda x: _moment(alpha, x, 1) if x > 0 else green_at_zero(alpha)  # noqa: E731
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        if xi == 0:
            v, _ = quad(g, 0.0, math.inf, epsabs=1e-11, limit=400)
        else:
            head, _ = quad(g, 0.0, 1.0, weight="cos", wvar=xi, epsabs=1e-12, limit=400)
            tail, _ = quad(g, 1.0, math.inf, weight="cos", wvar=xi, epsabs=1e-12, limit=400)
            v = head + tail
    return 2.0 * v / math.sqrt(2.0 * math.pi)


def multiplier_identity_residual(alpha: float, xis) -> np.ndarray:
    """``|(xi^2 + 1 + |xi| sin a) F G(xi) - 1/sqrt(2 pi)|`` at the sampled ``xi``."""
    out = []
    for xi in np.atleast_1d(xis):
        fg = fourier_transform_sampled(alpha, float(xi))
        out.append(abs(fg / float(multiplier(alpha, xi)) - 1.0 / math.sqrt(2.0 * math.pi)))
    return np.array(out)


def h1_norm(alpha: float) -> float:
    """``||G||_{H^1} = ((1/2pi) int (1 + xi^2) / (xi^2 + 1 + |xi| sin a)^2 dxi)^{1/2}``."""
    s = _check_alpha(alpha)
    v, _ = quad(lambda xi: (1 + xi * xi) / (xi * xi + 1 + xi * s) ** 2, 0, math.inf,
                epsabs=1e-12, limit=200)
    return math.sqrt(2.0 * v / (2.0 * math.pi))


def envelopes(alpha: float, x1) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Shapes of the upper bounds for ``G``, ``|G'|`` and ``G''`` (constants excluded)."""
    s = math.sin(alpha)
    x = np.abs(np.asarray(x1, dtype=float))
    ex = np.exp(-x / 2)
    lg = np.abs(np.log(x))
    e0 = s / (1 + x ** 2) + ex
    e1 = s / (1 + x ** 3) + ex
    with np.errstate(divide="ignore", invalid="ignore"):
        e2 = s * np.where(lg > 0, lg / (1 + x ** 4 * lg), 0.0) + ex
    return e0, e1, e2


def envelope_ratios(alpha: float, x1) -> np.ndarray:
    """Ratios ``G/e0``, ``|G'|/e1``, ``G''/e2`` on the sampled points (shape (3, n))."""
    xs = np.atleast_1d(np.asarray(x1, dtype=float))
    e0, e1, e2 = envelopes(alpha, xs)
    vals = np.array([green_eval(alpha, float(x)) for x in xs])
    return np.vstack([vals[:, 1] / e0, np.abs(vals[:, 2]) / e1, vals[:, 3] / e2])


def envelopes_hold(alpha: float, x1, constants=(C_G, C_G1, C_G2)) -> bool:
    xs = np.atleast_1d(np.asarray(x1, dtype=float))
    vals = np.array([green_eval(alpha, float(x)) for x in xs])
    e0, e1, e2 = envelopes(alpha, xs)
    g, g1, g2 = vals[:, 1], vals[:, 2], vals[:, 3]
    signs = np.all(g >= 0) and np.all(-np.sign(xs) * g1 >= 0) and np.all(g2 >= 0)
    c0, c1, c2 = constants
    return bool(signs and np.all(g <= c0 * e0) and np.all(np.abs(g1) <= c1 * e1)
                and np.all(g2 <= c2 * e2))


def green_convolve(alpha: float, rhs, grid: Grid, pad_factor: int = 8) -> np.ndarray:
    """Solve ``L g = rhs`` on the line by the exact multiplier on a padded ring."""
    _check_alpha(alpha)
    rhs = np.asarray(rhs, dtype=float)
    if rhs.shape != (grid.n_points,):
        raise ValueError("rhs length does not match the grid")
    M = sfft.next_fast_len(pad_factor * grid.n_points, real=True)
    xi = 2.0 * math.pi * np.fft.rfftfreq(M, d=grid.dx)
    fh = sfft.rfft(rhs, n=M)
    return sfft.irfft(fh * multiplier(alpha, xi), n=M)[: grid.n_points]


def apply_linearized(alpha: float, g, grid: Grid, plan: SpectralPlan | None = None) -> np.ndarray:
    """Finite-difference ``-g'' + g - sin(alpha) Lambda g`` (zero continuation outside)."""
    plan = plan or SpectralPlan(grid)
    g = np.asarray(g, dtype=float)
    ge = np.concatenate([[0.0], g, [0.0]])
    d2 = (ge[2:] - 2 * ge[1:-1] + ge[:-2]) / grid.dx ** 2
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lg = lambda_fourier(plan, g)
    return -d2 + g - math.sin(alpha) * lg
