"""Space-time test-function functionals evaluated on a stored trajectory.

With ``psi(t, x) = eta(t/tau) phi(x/R)``, ``phi(x) = eta(|x|)``, a solution of
``u_tt - Laplacian u + u_t = N(u)`` satisfies the weak identity

    I + J = K1 + K2 + K3,
    I  = int int N(u) psi,           J  = eps int (u0 + u1) phi_R,
    K1 = int int u psi_tt,           K2 = -int int u Laplacian psi,
    K3 = -int int u psi_t,

where the time integrals run over ``[0, tau)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ..integrator import NonlinearitySpec
from ..spectral import Field, SpectralGrid

_SMALL = 1e-3  # below this argument exp(-1/s) underflows harmlessly to 0


def _f(s: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``exp(-1/s)`` for ``s > 0`` (else 0) and its first two derivatives."""
    s = np.asarray(s, dtype=float)
    pos = s > _SMALL
    sp = np.where(pos, s, 1.0)
    f = np.where(pos, np.exp(-1.0 / sp), 0.0)
    d1 = f / (sp * sp)
    d2 = f * (1.0 / sp**4 - 2.0 / sp**3)
    return f, np.where(pos, d1, 0.0), np.where(pos, d2, 0.0)


def cutoff(t) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Smooth ``eta`` (1 on ``[0, 1/2]``, 0 on ``[1, inf)``) with ``eta'`` and ``eta''``."""
    t = np.asarray(t, dtype=float)
    a, a1, a2 = _f(1.0 - t)
    b, b1, b2 = _f(t - 0.5)
    # d/dt of f(1 - t) flips the sign of odd derivatives
    a1 = -a1
    S = a + b
    S1 = a1 + b1
    num1 = a1 * b - a * b1
    eta = a / S
    d1 = num1 / S**2
    d2 = (a2 * b - a * b2) / S**2 - 2.0 * num1 * S1 / S**3
    return eta, d1, d2


def spatial_cutoff(grid: SpectralGrid, R: float) -> tuple[np.ndarray, np.ndarray]:
    """``phi_R`` and ``Laplacian phi_R`` on the grid."""
    rad = np.sqrt(grid.r2)
    rho = rad / R
    eta, d1, d2 = cutoff(rho)
    lap = d2 / R**2
    if grid.n > 1:
        safe = np.where(rho > 0.25, rho, 1.0)
        lap = lap + np.where(rho > 0.25, (grid.n - 1) * d1 / (safe * R * R), 0.0)
    return eta, lap


@dataclass(frozen=True)
class TestFunctionReport:
    __test__ = False  # not a pytest test class despite the name

    tau: float
    R: float
    I: float
    J: float
    K1: float
    K2: float
    K3: float
    residual: float
    relative_residual: float
    chain_constant: float
    holder_constant: float
    eps_tau_kappa: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def testfunction_bound(times, fields, u0: Field, u1: Field, eps: float,
                       spec: NonlinearitySpec, tau: float, R: float | None = None,
                       lam: float | None = None) -> TestFunctionReport:
    """Evaluate ``I, J, K1..K3`` for a trajectory sampled uniformly in time.

    ``fields[k]`` holds ``u`` at ``times[k]``; the samples must start at 0
    and cover ``[0, tau]``.  ``R`` defaults to ``tau**0.5``.
    """
    grid = u0.grid
    times = np.asarray(times, dtype=float)
    R = math.sqrt(tau) if R is None else float(R)
    if times[0] != 0.0:
        raise ValueError("trajectory must start at t = 0")
    if tau > times[-1] * (1 + 1e-12):
        raise ValueError(f"tau = {tau} exceeds the stored horizon {times[-1]}")
    if R >= 0.5 * grid.L:
        raise ValueError(f"R = {R} exceeds the box half-width {0.5 * grid.L}")
    sel = times <= tau * (1 + 1e-12)
    ts = times[sel]
    if ts.size < 5:
        raise ValueError("too few samples in [0, tau]")
    us = np.asarray(fields)[sel]

    phi, lap_phi = spatial_cutoff(grid, R)
    eta, d1, d2 = cutoff(ts / tau)
    dv = grid.cell_volume
    axes = tuple(range(1, us.ndim))
    u_phi = np.sum(us * phi, axis=axes) * dv
    u_lap = np.sum(us * lap_phi, axis=axes) * dv
    n_phi = np.sum(spec(us) * phi, axis=axes) * dv

    I = integrate.simpson(eta * n_phi, x=ts)
    K1 = integrate.simpson(d2 / tau**2 * u_phi, x=ts)
    K2 = -integrate.simpson(eta * u_lap, x=ts)
    K3 = -integrate.simpson(d1 / tau * u_phi, x=ts)
    J = eps * float(np.sum((u0.values + u1.values) * phi)) * dv
    residual = K1 + K2 + K3 - I - J
    scale = abs(I) + abs(J)
    rel = abs(residual) / scale if scale > 0 else 0.0

    p = spec.p
    pp = p / (p - 1.0)
    n = grid.n
    chain = tau * R ** (n - 2 * pp) + tau ** (1 - pp) * R**n
    holder = tau ** (1 / pp) * R ** (-2 + n / pp) + tau ** (-1 + 1 / pp) * R ** (n / pp)
    chain_c = J / chain
    holder_c = (K1 + K2 + K3) / (holder * I ** (1 / p)) if I > 0 else math.nan
    kappa = None if lam is None else 1 / (p - 1) - lam / 2
    etk = eps * tau**kappa if kappa is not None else math.nan
    return TestFunctionReport(
        tau=float(tau), R=R, I=float(I), J=float(J), K1=float(K1), K2=float(K2), K3=float(K3),
        residual=float(residual), relative_residual=float(rel),
        chain_constant=float(chain_c), holder_constant=float(holder_c), eps_tau_kappa=float(etk),
    )


testfunction_bound.__test__ = False  # keep pytest from collecting it when imported
