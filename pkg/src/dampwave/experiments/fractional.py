"""Real-space check of the directional fractional derivative.

On the line, ``|d|^omega phi`` has the singular-integral form

    |d|^omega phi(x) = (1/c(omega)) \\int (phi(x - y) - phi(x)) |y|^{-1-omega} dy,
    c(omega) = 2 \\int_0^inf (cos y - 1) y^{-1-omega} dy   (negative).

The grid operator acts on the periodic extension, whose derivative is the
sum of the line result over all periods.  :func:`periodic_singular_integral`
adds that image sum so the two can be compared on the whole box.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate, special

from ..spectral import Field, directional_fractional


def fractional_constant(omega: float) -> float:
    """``c(omega) = 2 int_0^inf (cos y - 1) y^{-1-omega} dy`` by quadrature."""
    if not 0 < omega < 1:
        raise ValueError(f"omega must lie in (0, 1), got {omega}")
    # cos y - 1 = -2 sin^2(y/2) avoids cancellation near the origin
    head, _ = integrate.quad(lambda y: -2.0 * math.sin(0.5 * y) ** 2 * y ** (-1.0 - omega),
                             0.0, 1.0, epsabs=1e-15, epsrel=1e-13, limit=200)
    # tail: cosine part by the Fourier-integral rule on [1, inf), constant part exactly
    cos_part, _ = integrate.quad(lambda y: (1.0 + y) ** (-1.0 - omega), 0.0, np.inf,
                                 weight="cos", wvar=1.0)
    sin_part, _ = integrate.quad(lambda y: (1.0 + y) ** (-1.0 - omega), 0.0, np.inf,
                                 weight="sin", wvar=1.0)
    tail = math.cos(1.0) * cos_part - math.sin(1.0) * sin_part - 1.0 / omega
    return 2.0 * (head + tail)


def _phi(z: float) -> float:
    return math.exp(-0.5 * z * z)


def gaussian_singular_integral(x: float, omega: float, c: float | None = None) -> float:
    """``|d|^omega`` of ``exp(-x^2/2)`` at ``x`` on the whole line, by quadrature."""
    c = fractional_constant(omega) if c is None else c
    px = _phi(x)
    kern = lambda y: y ** (-1.0 - omega)  # noqa: E731

    def second_difference(y):
        # phi(x-y) + phi(x+y) - 2 phi(x) = 2 phi(x) (exp(-y^2/2) cosh(xy) - 1)
        return 2.0 * px * math.expm1(-0.5 * y * y + math.log(math.cosh(x * y))) * kern(y)

    if abs(x) < 8.0:
        near, _ = integrate.quad(second_difference, 0.0, 1.0, epsabs=1e-13, epsrel=1e-10,
                                 limit=200)
    else:
        near, _ = integrate.quad(lambda y: (_phi(x - y) + _phi(x + y) - 2.0 * px) * kern(y),
                                 0.0, 1.0, epsabs=1e-13, epsrel=1e-10, limit=200)
    # beyond y = 1 the Gaussian is negligible past |x| + 40
    top = abs(x) + 40.0
    pts = [abs(x)] if 1.0 < abs(x) < top else None
    far, _ = integrate.quad(lambda y: (_phi(x - y) + _phi(x + y)) * kern(y), 1.0, top,
                            points=pts, epsabs=1e-15, epsrel=1e-12, limit=400)
    far -= 2.0 * px / omega
    return (near + far) / c


def image_sum(x: np.ndarray, omega: float, L: float, c: float, nodes: int = 80) -> np.ndarray:
    """``sum_{m != 0}`` of the line result at ``x + m L`` for the unit Gaussian.

    Far from the Gaussian the line result reduces to
    ``(1/c) int phi(w) |x - w|^{-1-omega} dw``; the sum over periods is a
    pair of Hurwitz zeta values, integrated in ``w`` by Gauss-Hermite.
    """
    t, wts = np.polynomial.hermite.hermgauss(nodes)
    w = math.sqrt(2.0) * t
    wts = math.sqrt(2.0) * wts
    # nodes outside the box cell would put the zeta arguments below zero;
    # their weights are below exp(-L^2/8) and are dropped
    keep = np.abs(w) < 0.5 * L
    w, wts = w[keep], wts[keep]
    d = (np.asarray(x, dtype=float)[:, None] - w[None, :]) / L
    s = 1.0 + omega
    total = special.zeta(s, 1.0 + d) + special.zeta(s, 1.0 - d)
    return (total * wts[None, :]).sum(axis=1) * L ** (-s) / c


def periodic_singular_integral(x: np.ndarray, omega: float, L: float) -> np.ndarray:
    """Oracle for the grid operator applied to a box-centered unit Gaussian."""
    c = fractional_constant(omega)
    x = np.asarray(x, dtype=float)
    line = np.array([gaussian_singular_integral(float(xi), omega, c) for xi in x])
    return line + image_sum(x, omega, L, c)


def fractional_check(grid, omega: float) -> dict:
    """Relative L2 mismatch between the multiplier and the real-space oracle (1D)."""
    if grid.n != 1:
        raise ValueError("the singular-integral check is one-dimensional")
    x = grid.x_axis
    f = Field(grid, np.exp(-0.5 * x * x))
    spectral = directional_fractional(f, 0, omega).values
    oracle = periodic_singular_integral(x, omega, grid.L)
    err = float(np.linalg.norm(spectral - oracle) / np.linalg.norm(oracle))
    return {"omega": omega, "constant": fractional_constant(omega), "relative_l2_error": err}
