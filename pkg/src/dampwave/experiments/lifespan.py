"""Lifespan sweeps in the data amplitude."""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from ..config import RunConfig
from ..initial_data import make_data
from ..integrator import LifespanEstimate, estimate_lifespan
from ..spectral import make_grid
from .theory import regime, theory_rates


class SweepError(ValueError):
    """Raised when a sweep cannot produce a slope."""


@dataclass
class LifespanReport:
    config: RunConfig
    estimates: list
    slope: float | None
    intercept: float | None
    slope_stderr: float | None
    law: str
    lower_slope: float | None
    upper_slope: float | None
    regime: str
    verdict: str
    notes: list = field(default_factory=list)
    log_constant: float | None = None

    kind = "lifespan"

    @property
    def eps(self) -> list:
        return [e.eps for e in self.estimates]

    @property
    def passed(self) -> bool:
        return self.verdict == "PASS"

    def summary(self) -> dict:
        return {
            "law": self.law,
            "slope": self.slope,
            "intercept": self.intercept,
            "slope_stderr": self.slope_stderr,
            "lower_slope": self.lower_slope,
            "upper_slope": self.upper_slope,
            "log_constant": self.log_constant,
            "regime": self.regime,
            "verdict": self.verdict,
            "notes": self.notes,
            "estimates": [e.to_dict() for e in self.estimates],
        }


def _run_member(cfg: RunConfig, eps: float) -> LifespanEstimate:
    pb = cfg.problem
    grid = make_grid(pb.n, cfg.grid.N, cfg.grid.L)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        u0, u1 = make_data(cfg.profile(), grid)
    return estimate_lifespan(u0, u1, eps, cfg.nonlinearity(), cfg.step_controls(),
                             T_budget=cfg.experiment.T_budget)


def lifespan_sweep(cfg: RunConfig, eps_list=None, threads: int = 1,
                   rel_tolerance: float = 0.2) -> LifespanReport:
    """Estimate ``T(eps)`` for every amplitude and fit the scaling law.

    Below the critical exponent the fit is ``log T`` against ``log eps``; at
    ``r = 1, p = p_c`` it is ``log T`` against ``eps^{-(p-1)}`` and the slope
    is reported as the constant in the exponential law.
    """
    pb = cfg.problem
    eps_values = sorted((float(e) for e in (eps_list if eps_list is not None
                                            else cfg.experiment.eps_list)), reverse=True)
    if len(eps_values) < 3:
        raise SweepError(f"a lifespan sweep needs at least 3 amplitudes, got {len(eps_values)}")
    if len(set(eps_values)) != len(eps_values):
        raise SweepError("amplitudes must be distinct")
    with ThreadPoolExecutor(max_workers=max(1, int(threads))) as pool:
        estimates = list(pool.map(lambda e: _run_member(cfg, e), eps_values))

    rates = theory_rates(pb.n, pb.p, pb.r, pb.s, pb.alpha, pb.lam)
    reg = regime(pb.n, pb.p, pb.r)
    critical = pb.r == 1 and pb.p == rates.critical_p
    resolved = [e for e in estimates if e.resolved]
    report = LifespanReport(cfg, estimates, None, None, None,
                            "exponential" if critical else "power",
                            rates.lifespan_lower_slope, rates.lifespan_upper_slope, reg, "FAIL")
    if pb.r > 1 and pb.p == rates.critical_p:
        report.notes.append("r > 1 at the critical exponent: exploratory, no prediction is checked")
    if len(resolved) < 3:
        report.notes.append(f"only {len(resolved)} lifespans resolved within the budget")
        raise SweepError(f"fewer than 3 resolved lifespans ({len(resolved)})")
    eps = np.array([e.eps for e in resolved])
    T = np.array([e.T_num for e in resolved])
    if critical:
        fit = stats.linregress(eps ** (-(pb.p - 1)), np.log(T))
        report.slope, report.intercept, report.slope_stderr = fit.slope, fit.intercept, fit.stderr
        report.log_constant = float(fit.slope)
        report.verdict = "PASS" if fit.slope > 0 else "FAIL"
        report.notes.append("critical case: fitted constant C of exp(C eps^{-(p-1)}) is not checked")
        return report
    fit = stats.linregress(np.log(eps), np.log(T))
    report.slope, report.intercept, report.slope_stderr = (
        float(fit.slope), float(fit.intercept), float(fit.stderr))
    lower, upper = rates.lifespan_lower_slope, rates.lifespan_upper_slope
    if lower is None:
        report.notes.append("no subcritical prediction for these parameters")
        report.verdict = "FAIL"
    elif upper is not None and pb.lam is not None and cfg.data.kind == "power_decay":
        inside = upper <= report.slope <= lower
        report.verdict = "PASS" if inside else "FAIL"
        report.notes.append(f"bracket [{upper:g}, {lower:g}], measured {report.slope:.4f}")
    else:
        ok = abs(report.slope - lower) <= rel_tolerance * abs(lower)
        report.verdict = "PASS" if ok else "FAIL"
        report.notes.append(f"target {lower:g} within {rel_tolerance:.0%}, measured {report.slope:.4f}")
    if reg == "sdge":
        report.notes.append("parameters are in the global-existence regime")
    return report
