"""Diffusion-phenomenon experiments: distance to the heat profile."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from ..config import RunConfig
from ..initial_data import make_data
from ..integrator import evolve, log_schedule, make_state
from ..norms import RateFit, fit_rate, lp_norm
from ..propagators import apply_D_minus_G, apply_G
from ..spectral import Field, SpectralGrid, ifft_values, make_grid
from .decay import default_window
from .theory import theory_rates


def heat_kernel(grid: SpectralGrid, t: float) -> Field:
    """Periodic heat kernel ``(4 pi t)^{-n/2} exp(-|x|^2 / 4t)`` (unit mass) on the grid."""
    if not t > 0:
        raise ValueError(f"heat kernel needs t > 0, got {t}")
    coeffs = (2.0 * np.pi) ** (-grid.n / 2.0) * np.exp(-t * grid.k2)
    return Field(grid, ifft_values(grid, coeffs))


@dataclass(frozen=True)
class MassTail:
    """Tail ``int_T^inf m(t) dt`` of the nonlinear mass from a power fit ``m ~ t^{-g}``."""

    value: float
    exponent: float | None
    note: str


def mass_tail(times, masses, T: float, window: tuple[float, float] | None = None) -> MassTail:
    times = np.asarray(times, dtype=float)
    masses = np.asarray(masses, dtype=float)
    if times.size == 0 or not np.any(masses != 0):
        return MassTail(0.0, None, "no nonlinear mass recorded")
    window = window or (T / 10.0, T)
    sel = (times >= window[0]) & (times <= window[1])
    sign = np.sign(masses[sel][-1]) if np.any(sel) else 1.0
    vals = sign * masses[sel]
    if vals.size < 8 or np.any(vals <= 0):
        return MassTail(math.inf, None, "integrand changes sign or too few samples for a tail fit")
    # thin to at most 200 log-spaced samples so the fit is not dominated by dense late steps
    idx = np.unique(np.geomspace(1, vals.size, min(200, vals.size)).astype(int) - 1)
    fit = fit_rate(times[sel][idx], vals[idx])
    g = -fit.slope
    if g <= 1:
        return MassTail(math.inf, g, f"integrand decays like t^{-g:.3f}; tail not integrable")
    value = sign * math.exp(fit.intercept) * T ** (1 - g) / (g - 1)
    return MassTail(float(value), g, f"tail from fitted t^{-g:.3f} decay")


@dataclass
class ProfileReport:
    config: RunConfig
    profile_kind: str
    theta1: float
    theta2: float
    theta2_tail: MassTail
    times: np.ndarray
    difference: dict
    ratio: np.ndarray
    solution_l2: np.ndarray
    difference_fit: RateFit | None
    solution_fit: RateFit | None
    theory_exponent: float
    degenerate: bool
    outcome: dict
    verdicts: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    kind = "profile"

    @property
    def theta(self) -> float:
        return self.theta1 + self.theta2

    @property
    def passed(self) -> bool:
        return bool(self.verdicts) and all(v == "PASS" for v in self.verdicts.values())

    def summary(self) -> dict:
        return {
            "profile_kind": self.profile_kind,
            "theta": self.theta,
            "theta1": self.theta1,
            "theta2": self.theta2,
            "theta2_tail": self.theta2_tail.value,
            "theta2_tail_note": self.theta2_tail.note,
            "difference_fit": self.difference_fit.to_dict() if self.difference_fit else None,
            "solution_fit": self.solution_fit.to_dict() if self.solution_fit else None,
            "theory_exponent": self.theory_exponent,
            "degenerate": self.degenerate,
            "verdicts": self.verdicts,
            "notes": self.notes,
            "outcome": self.outcome,
        }


def diffusion_profile_experiment(cfg: RunConfig) -> ProfileReport:
    """Distance of the solution to ``theta G(t)`` (``r = 1``) or ``eps G(t)(u0 + u1)`` (``r > 1``)."""
    pb, eb = cfg.problem, cfg.experiment
    grid = make_grid(pb.n, cfg.grid.N, cfg.grid.L)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        u0, u1 = make_data(cfg.profile(), grid)
    window = default_window(cfg)
    sched = log_schedule(eb.t_first, eb.T, eb.per_decade)
    out = evolve(make_state(u0, u1, pb.eps), eb.T, cfg.nonlinearity(), cfg.step_controls(),
                 schedule=sched, store_fields=True)
    m_list = tuple(eb.m_list) or (2.0,)
    rates = theory_rates(pb.n, pb.p, pb.r, pb.s, pb.alpha, pb.lam, m=m_list[0], slack=eb.slack)
    data = u0 + u1
    theta1 = pb.eps * float(np.sum(data.values)) * grid.cell_volume
    tail = mass_tail(out.mass_times, out.masses, out.state.t)
    theta2 = out.theta2 + (tail.value if math.isfinite(tail.value) else 0.0)
    kind = rates.profile_kind
    times, ratio, sol = [], [], []
    diff = {m: [] for m in m_list}
    for t, u in zip(out.times, out.fields):
        if t <= 0:
            continue
        if kind == "mass":
            prof = heat_kernel(grid, t).values * (theta1 + theta2)
        else:
            prof = apply_G(t, data).values * pb.eps
        d = Field(grid, u - prof)
        uf = Field(grid, u)
        times.append(t)
        for m in m_list:
            diff[m].append(lp_norm(d, m))
        s2 = lp_norm(uf, 2)
        sol.append(s2)
        ratio.append(lp_norm(d, 2) / s2 if s2 > 0 else 0.0)
    times = np.array(times)
    degenerate = not np.any(np.array(sol) > 0)
    report = ProfileReport(
        cfg, kind, theta1, theta2, tail, times, {m: np.array(v) for m, v in diff.items()},
        np.array(ratio), np.array(sol), None, None, rates.profile, degenerate, out.summary(),
    )
    if not out.completed:
        report.verdicts["run"] = "FAIL"
        report.notes.append(f"run ended with status {out.status}")
        return report
    if degenerate:
        report.notes.append("zero solution: profile and solution vanish identically")
        return report
    m0 = m_list[0]
    report.difference_fit = fit_rate(times, report.difference[m0], window)
    report.solution_fit = fit_rate(times, report.solution_l2, window)
    ok = report.difference_fit.slope <= rates.profile + eb.tolerance
    report.verdicts["difference_exponent"] = "PASS" if ok else "FAIL"
    if not math.isfinite(tail.value):
        report.notes.append(tail.note)
    return report


def d_minus_g_check(grid: SpectralGrid, window: tuple[float, float] = (20.0, 400.0),
                    per_decade: int = 20, sigma: float = 1.0) -> tuple[RateFit, float]:
    """Slope of ``||(D(t) - G(t)) psi||_{L2}`` for a Gaussian ``psi`` and the predicted ``-n/4 - 1``."""
    psi = Field(grid, np.exp(-0.5 * grid.r2 / sigma**2))
    ts = log_schedule(window[0], window[1], per_decade, include_zero=False)
    vals = [lp_norm(apply_D_minus_G(float(t), psi), 2) for t in ts]
    return fit_rate(ts, np.array(vals)), -grid.n / 4.0 - 1.0
