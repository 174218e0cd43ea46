"""Reference solutions of the zero-mode reduction ``u'' + u' = N(u)``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from ..integrator import NonlinearitySpec


@dataclass(frozen=True)
class OdeResult:
    """``blowup_time`` is set when the trajectory escapes; otherwise ``u_final``
    at ``t_final`` certifies the behavior."""

    c: float
    blowup_time: float | None
    t_event: float | None
    u_event: float | None
    t_final: float
    u_final: float
    v_final: float

    @property
    def blows_up(self) -> bool:
        return self.blowup_time is not None


def blowup_constant(p: float) -> float:
    """``A`` in ``u ~ A (T - t)^{-2/(p-1)}`` for ``u'' = u^p``."""
    beta = 2.0 / (p - 1.0)
    return (beta * (beta + 1.0)) ** (1.0 / (p - 1.0))


def ode_oracle(c: float, p: float, form: str = "abs_power", v0: float = 0.0,
               t_max: float = 1e4, u_event: float = 1e8, rtol: float = 1e-12,
               atol: float = 1e-12) -> OdeResult:
    """Integrate ``u'' + u' = N(u)``, ``u(0) = c``, ``u'(0) = v0`` with DOP853.

    Integration stops once ``|u|`` reaches ``u_event``; the remaining time to
    blow-up is added from the leading asymptotics ``(A/|u|)^{(p-1)/2}``,
    whose relative error is ``O(|u|^{-(p-1)/2})``.
    """
    spec = NonlinearitySpec(form, p)

    def rhs(t, y):
        return [y[1], float(spec(np.array(y[0]))) - y[1]]

    def escape(t, y):
        return abs(y[0]) - u_event

    escape.terminal = True
    escape.direction = 1
    if c == 0.0 and v0 == 0.0:
        return OdeResult(c, None, None, None, t_max, 0.0, 0.0)
    sol = solve_ivp(rhs, (0.0, t_max), [c, v0], method="DOP853", rtol=rtol, atol=atol,
                    events=escape)
    if sol.t_events[0].size:
        te = float(sol.t_events[0][0])
        ue = float(sol.y_events[0][0][0])
        remaining = (blowup_constant(p) / abs(ue)) ** ((p - 1.0) / 2.0)
        return OdeResult(c, te + remaining, te, ue, te, ue, float(sol.y_events[0][0][1]))
    return OdeResult(c, None, None, None, float(sol.t[-1]), float(sol.y[0, -1]),
                     float(sol.y[1, -1]))


def ode_blowup_time(c: float, p: float = 2.0, form: str = "abs_power", **kw) -> float:
    res = ode_oracle(c, p, form, **kw)
    if res.blowup_time is None:
        return math.inf
    return res.blowup_time


def scalar_midpoint_step(u: float, v: float, h: float, spec: NonlinearitySpec) -> tuple[float, float]:
    """The integrator's step restricted to the zero mode (``k2 = 0``)."""
    from ..propagators import state_propagator

    a, b, c, d = (float(e[0]) for e in state_propagator(0.5 * h, 0.0))
    um, vm = a * u + b * v, c * u + d * v
    vm = vm + h * float(spec(np.array(um)))
    return a * um + b * vm, c * um + d * vm
