"""Predicted exponents: decay rates, profile rates and lifespan laws."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..norms import derive_table2


@dataclass(frozen=True)
class TheoryRates:
    """Exponents of ``<t>`` (decay) and of ``eps`` (lifespan) for one parameter set.

    ``profile_kind`` is ``"mass"`` when the profile is ``theta G(t)`` (``r = 1``)
    and ``"heat_data"`` when it is ``eps G(t)(u0 + u1)`` (``r > 1``).
    """

    n: int
    p: float
    r: float
    s: float
    alpha: float
    lam: float | None
    m: float
    slack: float
    l2: float
    hs: float
    weighted: float
    critical_p: float
    omega: float
    kappa: float | None
    lifespan_lower_slope: float | None
    lifespan_upper_slope: float | None
    profile_kind: str
    profile_selector: float
    profile: float
    source_gain: float
    source_gain_weighted: float
    source_l2: float
    source_hs: float
    source_weighted: float
    heat_profile_l2: float
    heat_profile_hs: float
    heat_profile_weighted: float
    lower_case: int | None
    regime: str

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def m_range(n: int, s: float, r: float) -> tuple[float, float, bool]:
    """``(m_min, m_max, max_included)`` for the profile estimates."""
    if s < n / 2:
        return r, 2 * n / (n - 2 * s), True
    if s == n / 2:
        return r, math.inf, False
    return r, math.inf, True


def regime(n: int, p: float, r: float) -> str:
    """Small-data blow-up (``sdbu``) or global existence (``sdge``) by the critical exponent."""
    pc = 1 + 2 * r / n
    if p < pc:
        return "sdbu"
    if p == pc:
        return "sdbu_critical" if r == 1 else "sdge"
    return "sdge"


def theory_rates(n: int, p: float, r: float, s: float, alpha: float,
                 lam: float | None = None, m: float = 2.0, slack: float = 0.0) -> TheoryRates:
    """Evaluate every predicted exponent; pure arithmetic on the inputs."""
    table = derive_table2(n, p, r, s, alpha)
    lo, hi, hi_ok = m_range(n, s, r)
    if not (m >= lo and (m < hi or (m == hi and hi_ok))):
        raise ValueError(f"m = {m} outside the admissible range [{lo}, {hi}{']' if hi_ok else ')'}")
    base = 0.5 * n * (1 / r - 0.5)
    l2 = -base
    hs = l2 - s / 2
    weighted = l2 + alpha / 2
    omega = 1 / (p - 1) - n / (2 * r)
    kappa = None if lam is None else 1 / (p - 1) - lam / 2
    lower = -1 / omega if omega > 0 else None
    upper = -1 / kappa if kappa is not None and kappa > 0 else None
    if r > 1:
        kind = "heat_data"
        selector = min(0.5 * n * (1 - 1 / r), 0.5, n / (2 * r) * (p - 1) - 1)
        spread = 0.5 * n * (1 / r - 1 / m)
    else:
        kind = "mass"
        selector = min(alpha / 2 - n / 4, 0.5, 0.5 * n * (p - 1) - 1)
        spread = 0.5 * n * (1 - 1 / m)
    gain = min(1.0, n / (2 * r) * (p - 1) - 0.5)
    gain_w = min(1.0, n / (2 * r) * (p - 1) - min(n / 4, 0.5))
    heat_sel = min(0.5 * n * (1 - 1 / r), 0.5, n / (2 * r) * (p - 1) - 1)
    return TheoryRates(
        n=n, p=p, r=r, s=s, alpha=alpha, lam=lam, m=m, slack=slack,
        l2=l2, hs=hs, weighted=weighted,
        critical_p=table.critical_p, omega=omega, kappa=kappa,
        lifespan_lower_slope=lower, lifespan_upper_slope=upper,
        profile_kind=kind, profile_selector=selector,
        profile=-spread - selector + slack,
        source_gain=gain, source_gain_weighted=gain_w,
        source_l2=l2 - gain, source_hs=hs - gain, source_weighted=weighted - gain_w,
        heat_profile_l2=l2 - heat_sel + slack, heat_profile_hs=hs - heat_sel + slack,
        heat_profile_weighted=weighted - heat_sel + slack,
        lower_case=table.flags["lifespan_lower_case"],
        regime=regime(n, p, r),
    )


def format_rates(rates: TheoryRates) -> str:
    """Human-readable summary, one quantity per line."""
    lines = [
        f"n = {rates.n}, p = {rates.p:g}, r = {rates.r:g}, s = {rates.s:g}, alpha = {rates.alpha:g}",
        f"critical exponent p_c = {rates.critical_p:g} ({rates.regime})",
        f"L2 decay exponent = {rates.l2:g}",
        f"|grad|^s decay exponent = {rates.hs:g}",
        f"|x|^alpha weighted decay exponent = {rates.weighted:g}",
        f"profile ({rates.profile_kind}) exponent in L^{rates.m:g} = {rates.profile:g}",
        f"omega = {rates.omega:g}",
    ]
    if rates.lifespan_lower_slope is not None:
        lines.append(f"lifespan slope lower-bound law = {rates.lifespan_lower_slope:g}")
    if rates.kappa is not None:
        lines.append(f"kappa = {rates.kappa:g}")
        if rates.lifespan_upper_slope is not None:
            lines.append(f"lifespan slope upper-bound law = {rates.lifespan_upper_slope:g}")
    return "\n".join(lines)
