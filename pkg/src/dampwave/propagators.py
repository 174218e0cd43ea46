"""Exact linear solution operators of the damped wave and heat equations.

Every operator is a Fourier multiplier in ``k2 = |xi|^2``.  The damped-wave
kernel

    L(t, xi) = sinh(t sqrt(z)) / sqrt(z),   z = 1/4 - |xi|^2,

switches to ``sin(t sqrt(-z)) / sqrt(-z)`` above ``|xi| = 1/2`` and is
evaluated by its even Taylor series near the branch point.  The damping
factor ``exp(-t/2)`` is always folded into the multiplier so that large
times never overflow.

The per-mode state propagator maps ``(u_hat, v_hat)(0)`` with
``v = du/dt`` to ``(u_hat, v_hat)(t)``::

    [ A   B ]     A = e^{-t/2}(C + S/2),   B = e^{-t/2} S,
    [ -k2 B  D']   D' = e^{-t/2}(C - S/2),

with ``C = cosh(t mu)``, ``S = sinh(t mu)/mu`` and ``mu = sqrt(z)``.  Its
determinant is exactly ``exp(-t)``.
"""

from __future__ import annotations

from math import factorial

import numpy as np

from .spectral import Field, SpectralGrid, fft_values, ifft_values

SERIES_THRESHOLD = 1e-4
SERIES_TERMS = 4

_S_COEF = np.array([1.0 / factorial(2 * m + 1) for m in range(SERIES_TERMS)])
_C_COEF = np.array([1.0 / factorial(2 * m) for m in range(SERIES_TERMS)])


def _check_time(t: float) -> float:
    t = float(t)
    if not t >= 0.0:
        raise ValueError(f"time must be nonnegative, got {t}")
    return t


def _check_k2(k2) -> np.ndarray:
    k2 = np.asarray(k2, dtype=float)
    if np.any(k2 < 0):
        raise ValueError("k2 = |xi|^2 must be nonnegative")
    return k2


def _poly(coef: np.ndarray, w: np.ndarray) -> np.ndarray:
    out = np.zeros_like(w)
    for c in coef[::-1]:
        out = out * w + c
    return out


def eval_L(t: float, k2) -> np.ndarray | float:
    """Undamped kernel ``L(t, xi)`` as a function of ``k2 = |xi|^2``.

    Overflows for ``t`` beyond roughly 1400 at low frequency; use
    :func:`damped_kernel` for propagation.
    """
    t = _check_time(t)
    k2 = _check_k2(k2)
    scalar = k2.ndim == 0
    k2 = np.atleast_1d(k2)
    z = 0.25 - k2
    w = t * t * z
    out = np.empty_like(k2)
    ser = np.abs(w) < SERIES_THRESHOLD
    hi = ~ser & (z > 0)
    lo = ~ser & (z < 0)
    out[ser] = t * _poly(_S_COEF, w[ser])
    mu = np.sqrt(z[hi])
    out[hi] = np.sinh(t * mu) / mu
    nu = np.sqrt(-z[lo])
    out[lo] = np.sin(t * nu) / nu
    return float(out[0]) if scalar else out


def _damped_cs(t: float, k2: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(e^{-t/2} C, e^{-t/2} S)`` for every entry of ``k2``."""
    z = 0.25 - k2
    w = t * t * z
    damp = np.exp(-0.5 * t)
    c = np.empty_like(k2)
    s = np.empty_like(k2)

    ser = np.abs(w) < SERIES_THRESHOLD
    c[ser] = damp * _poly(_C_COEF, w[ser])
    s[ser] = damp * t * _poly(_S_COEF, w[ser])

    osc = ~ser & (z < 0)
    nu = np.sqrt(-z[osc])
    c[osc] = damp * np.cos(t * nu)
    s[osc] = damp * np.sin(t * nu) / nu

    grow = ~ser & (z > 0)
    mu = np.sqrt(z[grow])
    small = t * mu <= 1.0
    # moderate exponent: direct hyperbolic functions are accurate
    ms = mu[small]
    gs = np.flatnonzero(grow)[small]
    c.flat[gs] = damp * np.cosh(t * ms)
    s.flat[gs] = damp * np.sinh(t * ms) / ms
    # large exponent: t(mu - 1/2) = -t k2 / (1/2 + mu) keeps both exponents <= 0
    ml = mu[~small]
    gl = np.flatnonzero(grow)[~small]
    e1 = np.exp(-t * k2.flat[gl] / (0.5 + ml))
    e2 = np.exp(-t * (0.5 + ml))
    c.flat[gl] = 0.5 * (e1 + e2)
    s.flat[gl] = (e1 - e2) / (2.0 * ml)
    return c, s


def damped_kernel(t: float, k2) -> np.ndarray:
    """Multiplier of ``D(t)``: ``e^{-t/2} L(t, xi)``."""
    t = _check_time(t)
    k2 = np.atleast_1d(_check_k2(k2))
    return _damped_cs(t, k2)[1]


def dtilde_multiplier(t: float, k2) -> np.ndarray:
    """Multiplier of ``(d/dt + 1) D(t)``: ``e^{-t/2}(cosh(t mu) + sinh(t mu)/(2 mu))``."""
    t = _check_time(t)
    k2 = np.atleast_1d(_check_k2(k2))
    c, s = _damped_cs(t, k2)
    return c + 0.5 * s


def heat_multiplier(t: float, k2) -> np.ndarray:
    t = _check_time(t)
    return np.exp(-t * np.atleast_1d(_check_k2(k2)))


def state_propagator(t: float, k2) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Entries ``(A, B, lower_left, lower_right)`` of the per-mode 2x2 propagator."""
    t = _check_time(t)
    k2 = np.atleast_1d(_check_k2(k2))
    c, s = _damped_cs(t, k2)
    return c + 0.5 * s, s, -k2 * s, c - 0.5 * s


def d_minus_g_multiplier(t: float, k2) -> np.ndarray:
    """Fused multiplier ``e^{-t/2} L(t, xi) - e^{-t |xi|^2}``.

    In the low-frequency, large-time regime the two terms nearly cancel;
    there the difference is rewritten as

        e^{-t k2} [expm1(-t k2^2/(1/2+mu)^2)/(2 mu) + 2 k2/(mu (1 + 2 mu))]
        - e^{-t(1/2+mu)}/(2 mu)

    which has no subtractive cancellation.
    """
    t = _check_time(t)
    k2 = np.atleast_1d(_check_k2(k2))
    out = damped_kernel(t, k2) - np.exp(-t * k2)
    z = 0.25 - k2
    fused = (z > 0) & (np.abs(t * t * z) >= SERIES_THRESHOLD)
    mu = np.sqrt(np.where(fused, z, 1.0))
    fused &= t * mu > 1.0
    if np.any(fused):
        kk = k2[fused]
        m = mu[fused]
        a = -t * kk * kk / (0.5 + m) ** 2
        out[fused] = np.exp(-t * kk) * (
            np.expm1(a) / (2.0 * m) + 2.0 * kk / (m * (1.0 + 2.0 * m))
        ) - np.exp(-t * (0.5 + m)) / (2.0 * m)
    return out


def _apply(f: Field, mult: np.ndarray) -> Field:
    grid = f.grid
    return Field(grid, ifft_values(grid, fft_values(grid, f.values) * mult.reshape(grid.shape)))


def _grid_k2(grid: SpectralGrid) -> np.ndarray:
    return np.asarray(grid.k2).reshape(-1)


def apply_D(t: float, f: Field) -> Field:
    """``D(t) f``: solution at time ``t`` with zero displacement and velocity ``f``."""
    return _apply(f, damped_kernel(t, _grid_k2(f.grid)))


def apply_Dtilde(t: float, f: Field) -> Field:
    """``(d/dt + 1) D(t) f``."""
    return _apply(f, dtilde_multiplier(t, _grid_k2(f.grid)))


def apply_G(t: float, f: Field) -> Field:
    """Heat semigroup ``exp(t Laplacian) f``."""
    return _apply(f, heat_multiplier(t, _grid_k2(f.grid)))


def apply_D_minus_G(t: float, f: Field) -> Field:
    return _apply(f, d_minus_g_multiplier(t, _grid_k2(f.grid)))


def propagate_coeffs(
    t: float, grid: SpectralGrid, U: np.ndarray, V: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Apply the exact linear propagator to spectral coefficients."""
    a, b, c, d = (e.reshape(grid.shape) for e in state_propagator(t, _grid_k2(grid)))
    return a * U + b * V, c * U + d * V


def linear_propagate(state, t: float):
    """Advance a :class:`~dampwave.integrator.WaveState` by ``t`` with ``N = 0``."""
    t = _check_time(t)
    grid = state.grid
    if not (state.u.grid.same_as(grid) and state.v.grid.same_as(grid)):
        raise ValueError("state fields live on different grids")
    U, V = propagate_coeffs(t, grid, fft_values(grid, state.u.values), fft_values(grid, state.v.values))
    return state.replace(
        u=Field(grid, ifft_values(grid, U)), v=Field(grid, ifft_values(grid, V)), t=state.t + t
    )
