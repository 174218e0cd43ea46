"""Norm functionals, the composite time-weighted norms, and rate fitting."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from scipy import stats

from .spectral import Field, fft_values, japanese_bracket


def lp_norm(f: Field, m: float) -> float:
    """Rectangle-rule ``L^m`` norm; ``m = inf`` is the grid maximum."""
    if m == math.inf:
        return float(np.max(np.abs(f.values)))
    if not m >= 1:
        raise ValueError(f"Lebesgue exponent must be >= 1 or inf, got {m}")
    a = np.abs(f.values)
    if m == 1:
        return float(np.sum(a) * f.grid.cell_volume)
    if m == 2:
        return math.sqrt(float(np.sum(a * a)) * f.grid.cell_volume)
    return float((np.sum(a**m) * f.grid.cell_volume) ** (1.0 / m))


def sobolev_seminorm(f: Field, s: float) -> float:
    """``|| |nabla|^s f ||_{L^2}``, evaluated on the spectral side (Parseval)."""
    if s < 0:
        raise ValueError(f"order s must be nonnegative, got {s}")
    grid = f.grid
    coeffs = fft_values(grid, f.values)
    weight = grid.k2**s if s else 1.0
    return math.sqrt(float(np.sum(weight * np.abs(coeffs) ** 2)) * grid.dxi**grid.n)


def weighted_l2(f: Field, alpha: float, homogeneous: bool = True) -> float:
    """``|| |x|^alpha f ||_{L^2}`` or, with ``homogeneous=False``, ``|| <x>^alpha f ||``."""
    if alpha < 0:
        raise ValueError(f"weight order must be nonnegative, got {alpha}")
    grid = f.grid
    if alpha == 0:
        return lp_norm(f, 2)
    base = np.sqrt(grid.r2) if homogeneous else japanese_bracket(grid)
    g = f.values * base**alpha
    return math.sqrt(float(np.sum(g * g)) * grid.cell_volume)


def inhomogeneous_sobolev(f: Field, s: float) -> float:
    """``|| <nabla>^s f ||_{L^2}``, the ``H^{s,0}`` norm."""
    grid = f.grid
    coeffs = fft_values(grid, f.values)
    weight = (1.0 + grid.k2) ** s
    return math.sqrt(float(np.sum(weight * np.abs(coeffs) ** 2)) * grid.dxi**grid.n)


def bracket_time(t: float) -> float:
    return math.sqrt(1.0 + t * t)


# ---------------------------------------------------------------------------
# Parameter table for the composite norms
# ---------------------------------------------------------------------------


class ParameterError(ValueError):
    """Raised when exponents fall outside the admissible ranges."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


@dataclass(frozen=True)
class NormParameterTable:
    n: int
    p: float
    r: float
    s: float
    alpha: float
    eta: float
    mu: float | None
    zeta: float
    q: float
    rho: float
    sigma1: float
    sigma2: float
    flags: dict = field(default_factory=dict)

    @property
    def decay_exponent(self) -> float:
        """``(n/2)(1/r - 1/2)``, the base time weight of the X-norm."""
        return 0.5 * self.n * (1.0 / self.r - 0.5)

    @property
    def critical_p(self) -> float:
        return 1.0 + 2.0 * self.r / self.n


def _positive_part(a: float) -> float:
    return a if a > 0 else 0.0


def _lwp_ok(n: int, p: float, r: float, s: float) -> bool:
    if n == 1 and not s < 1:
        return False
    if n <= 2 * s:
        return p >= min(1 + r / 2, 1 + r / n)
    if n >= 2:
        return 1 + r / n <= p <= min(1 + 2 / (n - 2 * s), 2 * n / (r * (n - 2 * s)))
    return 1 + r / 2 <= p <= 1 / (1 - 2 * s)


def _gwp_ok(n: int, p: float, r: float, s: float) -> bool:
    pc = 1 + 2 * r / n
    above = p > pc or (r > 1 and p == pc)
    if n <= 2 * s:
        return above
    if n >= 2:
        return above and p <= min(1 + 2 / (n - 2 * s), 2 * n / (r * (n - 2 * s)))
    return above and p <= 1 / (1 - 2 * s)


def derive_table2(n: int, p: float, r: float, s: float, alpha: float) -> NormParameterTable:
    """Fill in the derived exponents of the X/Y norms and the admissibility flags."""
    violations = []
    if int(n) != n or n < 1:
        violations.append(f"n must be a positive integer (got {n})")
    if not p > 1:
        violations.append(f"p > 1 violated (p = {p})")
    if not 1 <= r <= 2:
        violations.append(f"r in [1, 2] violated (r = {r})")
    if not s >= 0:
        violations.append(f"s >= 0 violated (s = {s})")
    if not violations:
        floor = n * (1.0 / r - 0.5)
        if not alpha > floor:
            violations.append(f"alpha > n(1/r - 1/2) = {floor:g} violated (alpha = {alpha})")
    if violations:
        raise ParameterError(violations)

    n = int(n)
    frac = s - math.floor(s)
    if n >= 2:
        mu = n / 2 - 1 / (p - 1)
        eta = 0.5 * mu * (p - 1) + s / 2 + 0.5 * n * p * (1 / r - 0.5)
        zeta = n / (2 * r) * (p - 1) - 0.5 + 0.5 * n * (1 / r - 0.5) - alpha / 2
        q = 2 * n / (n + 2)
        rho = 2 * n / (n + 2 - 2 * frac)
        sigma1 = max(1.0, n * r / (n + r))
        dn = _positive_part(n - 2 * s)
        sigma2 = 2.0 if dn == 0 else min(2.0, 2 * n / (p * dn))
    else:
        mu = None
        eta = 0.5 * (p / r - 0.5)
        zeta = (p - 1) / (2 * r) - 0.25 + 0.5 * (1 / r - 0.5) - alpha / 2
        q, rho, sigma1, sigma2 = 1.0, 2.0, 1.0, 2.0

    pc = 1 + 2 * r / n
    lwp = _lwp_ok(n, p, r, s)
    gwp = lwp and _gwp_ok(n, p, r, s)
    if lwp and min(1 + r / 2, 1 + r / n) <= p < pc:
        lower_case = 1
    elif lwp and r == 1 and p == pc:
        lower_case = 2
    else:
        lower_case = None
    flags = {
        "local_wellposed": lwp,
        "global_small_data": gwp,
        "asymptotic_profile": gwp and (r == 1 or p > pc),
        "lifespan_lower_case": lower_case,
        "lifespan_upper": lwp and p < pc and alpha < 2 / (p - 1) - n / 2,
    }
    return NormParameterTable(
        n=n, p=p, r=r, s=s, alpha=alpha, eta=eta, mu=mu, zeta=zeta, q=q, rho=rho,
        sigma1=sigma1, sigma2=sigma2, flags=flags,
    )


# ---------------------------------------------------------------------------
# Snapshots and the X(T) tracker
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NormSnapshot:
    t: float
    l2: float
    hs: float
    wl2_alpha: float
    lm: dict
    xsummands: tuple

    def is_healthy(self) -> bool:
        values = [self.l2, self.hs, self.wl2_alpha, *self.lm.values(), *self.xsummands]
        return all(math.isfinite(v) and v >= 0 for v in values)


def snapshot(t: float, u: Field, r: float, s: float, alpha: float,
             m_list: Iterable[float] = ()) -> NormSnapshot:
    """Norms of ``u`` at time ``t`` plus the three X-norm summands."""
    n = u.grid.n
    a = 0.5 * n * (1.0 / r - 0.5)
    l2 = lp_norm(u, 2)
    hs = sobolev_seminorm(u, s)
    wl2 = weighted_l2(u, alpha, homogeneous=True)
    bt = bracket_time(t)
    summands = (bt**a * l2, bt ** (a + s / 2) * hs, bt ** (a - alpha / 2) * wl2)
    lm = {float(m): lp_norm(u, m) for m in m_list}
    return NormSnapshot(float(t), l2, hs, wl2, lm, summands)


class XNormTracker:
    """Running supremum over time of the summed X-norm weights."""

    def __init__(self) -> None:
        self.value = 0.0
        self.t_last = -math.inf
        self.history: list[tuple[float, float]] = []

    def update(self, snap: NormSnapshot) -> float:
        if snap.t < self.t_last:
            raise ValueError(f"snapshot time went backwards: {snap.t} < {self.t_last}")
        self.t_last = snap.t
        self.value = max(self.value, float(sum(snap.xsummands)))
        self.history.append((snap.t, self.value))
        return self.value


def x_norm_update(tracker: XNormTracker, snap: NormSnapshot) -> float:
    return tracker.update(snap)


def y_norm_summands(t: float, psi: Field, table: NormParameterTable,
                    n_gamma: int = 17) -> tuple[float, float, float]:
    """The three time-weighted pieces of the Y-norm of a nonlinear term at time ``t``.

    Diagnostic only; the supremum over ``gamma`` is taken on ``n_gamma`` samples.
    """
    from .spectral import fractional_laplacian_power

    bt = bracket_time(t)
    deriv = fractional_laplacian_power(psi, math.floor(table.s))
    first = bt**table.eta * lp_norm(deriv, table.rho)
    second = 0.0
    for gamma in np.linspace(table.sigma1, table.sigma2, n_gamma):
        w = 0.5 * table.n * (table.p / table.r - 1.0 / gamma)
        second = max(second, bt**w * lp_norm(psi, float(gamma)))
    weighted = Field(psi.grid, psi.values * japanese_bracket(psi.grid) ** table.alpha)
    third = bt**table.zeta * lp_norm(weighted, table.q)
    return first, second, third


# ---------------------------------------------------------------------------
# CSV schema
# ---------------------------------------------------------------------------


def snapshot_header(m_list: Sequence[float]) -> list[str]:
    return ["t", "l2", "hs", "wl2_alpha", *[f"lm_{m:g}" for m in m_list],
            "xsummand1", "xsummand2", "xsummand3"]


def snapshots_to_csv(snaps: Sequence[NormSnapshot], m_list: Sequence[float] = ()) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(snapshot_header(m_list))
    for sn in snaps:
        row = [sn.t, sn.l2, sn.hs, sn.wl2_alpha, *[sn.lm[float(m)] for m in m_list], *sn.xsummands]
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Rate fitting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    t_min: float
    t_max: float
    residual: float
    stderr: float
    count: int

    def to_dict(self) -> dict:
        return {
            "slope": self.slope, "intercept": self.intercept, "window": [self.t_min, self.t_max],
            "residual": self.residual, "stderr": self.stderr, "count": self.count,
        }


def fit_rate(t, values, window: tuple[float, float] | None = None, min_points: int = 8) -> RateFit:
    """Least-squares slope of ``log(value)`` against ``log(t)`` inside ``window``."""
    t = np.asarray(t, dtype=float)
    values = np.asarray(values, dtype=float)
    if window is not None:
        lo, hi = window
        sel = (t >= lo * (1 - 1e-12)) & (t <= hi * (1 + 1e-12))
        t, values = t[sel], values[sel]
    if t.size < min_points:
        raise ValueError(f"fit window holds {t.size} samples, need at least {min_points}")
    if np.any(values <= 0) or np.any(t <= 0):
        raise ValueError("rate fits need positive times and positive values")
    x, y = np.log(t), np.log(values)
    res = stats.linregress(x, y)
    resid = y - (res.intercept + res.slope * x)
    return RateFit(
        slope=float(res.slope), intercept=float(res.intercept), t_min=float(t.min()),
        t_max=float(t.max()), residual=float(np.sqrt(np.mean(resid**2))),
        stderr=float(res.stderr), count=int(t.size),
    )
