"""Exponential midpoint integrator for the mild (Duhamel) formulation.

One step of size ``h`` advances the spectral state ``Y = (U, V)`` by

    Y_mid = P(h/2) Y
    u_mid = real part of the first component of Y_mid
    Y_new = P(h/2) (Y_mid + (0, h N_hat(u_mid)))

which equals ``P(h) Y + h P(h/2) (0, N_hat(u_mid))``: the Duhamel integral
over the step is replaced by its midpoint value.  The linear part is exact,
so the step size is limited only by the accuracy of the nonlinear term.

The state is kept in spectral space between steps; physical samples are
only formed at the midpoint, at snapshot times and for the blow-up check.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .norms import NormSnapshot, snapshot
from .propagators import state_propagator
from .spectral import Field, SpectralGrid, fft_values, ifft_values

FORMS = ("abs_power", "signed_power", "neg_abs_power")


@dataclass(frozen=True)
class NonlinearitySpec:
    """Power nonlinearity ``N(u)``.

    ``coefficient`` scales the whole term; zero gives the linear equation.
    ``p0`` is only carried along for reports.
    """

    form: str = "abs_power"
    p: float = 2.0
    p0: int | None = None
    coefficient: float = 1.0

    def __post_init__(self) -> None:
        if self.form not in FORMS:
            raise ValueError(f"unknown nonlinearity form {self.form!r}; expected one of {FORMS}")
        if not self.p > 1:
            raise ValueError(f"exponent p must exceed 1, got {self.p}")

    @property
    def is_linear(self) -> bool:
        return self.coefficient == 0.0

    def __call__(self, u: np.ndarray) -> np.ndarray:
        if self.is_linear:
            return np.zeros_like(u)
        a = np.abs(u)
        p = self.p
        if p == 2:
            power = a * a
        elif p == 3:
            power = a * a * a
        else:
            power = a**p
        if self.form == "signed_power":
            power = np.sign(u) * power
        elif self.form == "neg_abs_power":
            power = -power
        return self.coefficient * power if self.coefficient != 1.0 else power


LINEAR = NonlinearitySpec(coefficient=0.0)


def eval_nonlinearity(f: Field, spec: NonlinearitySpec, dealias: bool = False) -> Field:
    """Pointwise ``N(f)``, optionally restricted to the 2/3-rule band."""
    values = spec(f.values)
    if dealias:
        grid = f.grid
        values = ifft_values(grid, np.where(grid.dealias_mask, fft_values(grid, values), 0.0))
    return Field(f.grid, values)


@dataclass(frozen=True)
class WaveState:
    """Displacement ``u`` and velocity ``v = du/dt`` at clock ``t``."""

    grid: SpectralGrid
    u: Field
    v: Field
    t: float = 0.0
    eps: float = 1.0

    def __post_init__(self) -> None:
        if not (self.u.grid.same_as(self.grid) and self.v.grid.same_as(self.grid)):
            raise ValueError("u and v must live on the state grid")
        if not self.t >= 0:
            raise ValueError(f"clock must be nonnegative, got {self.t}")

    def replace(self, **changes) -> "WaveState":
        return dataclasses.replace(self, **changes)

    def is_finite(self) -> bool:
        return self.u.is_finite() and self.v.is_finite()


def make_state(u0: Field, u1: Field, eps: float = 1.0, t: float = 0.0) -> WaveState:
    """State with ``u(t) = eps u0`` and ``v(t) = eps u1``."""
    return WaveState(u0.grid, u0 * eps, u1 * eps, float(t), float(eps))


@dataclass(frozen=True)
class StepControls:
    """Time-stepping parameters.

    ``m_blow`` is an absolute sup-norm threshold; when unset the threshold is
    ``blow_factor`` times the initial sup norm of the data.
    """

    dt: float = 0.05
    safety: float = 0.9
    dt_max: float = 1.0
    dt_min: float = 1e-9
    tol: float = 1e-7
    m_blow: float | None = None
    blow_factor: float = 1e6
    dealias: bool = True
    adaptive: bool = True

    def validate(self) -> None:
        problems = []
        if not 0 < self.dt_min < self.dt_max:
            problems.append(f"need 0 < dt_min < dt_max (got {self.dt_min}, {self.dt_max})")
        if not self.dt > 0:
            problems.append(f"initial dt must be positive (got {self.dt})")
        if not 0 < self.safety <= 1:
            problems.append(f"safety factor must lie in (0, 1] (got {self.safety})")
        if not self.tol > 0:
            problems.append(f"tolerance must be positive (got {self.tol})")
        if self.m_blow is not None and not self.m_blow > 0:
            problems.append(f"m_blow must be positive (got {self.m_blow})")
        if not self.blow_factor > 0:
            problems.append(f"blow_factor must be positive (got {self.blow_factor})")
        if problems:
            raise ValueError("; ".join(problems))

    def threshold(self, state: WaveState) -> float:
        if self.m_blow is not None:
            return float(self.m_blow)
        ref = max(float(np.max(np.abs(state.u.values))), float(np.max(np.abs(state.v.values))))
        return math.inf if ref == 0 else self.blow_factor * ref


@dataclass(frozen=True)
class NormRequest:
    """Which norms to record at snapshot times."""

    r: float = 1.0
    s: float = 0.0
    alpha: float = 0.0
    m_list: tuple = ()


@dataclass
class EvolveOutcome:
    status: str
    state: WaveState
    blowup_time: float | None = None
    bracket: tuple | None = None
    snapshots: list = field(default_factory=list)
    times: list = field(default_factory=list)
    fields: list = field(default_factory=list)
    mass_times: list = field(default_factory=list)
    masses: list = field(default_factory=list)
    theta2: float = 0.0
    steps: int = 0
    rejected: int = 0
    sup_history: list = field(default_factory=list)

    @property
    def completed(self) -> bool:
        return self.status == "completed"

    def summary(self) -> dict:
        return {
            "status": self.status,
            "t_final": self.state.t,
            "blowup_time": self.blowup_time,
            "bracket": list(self.bracket) if self.bracket else None,
            "theta2": self.theta2,
            "steps": self.steps,
            "rejected": self.rejected,
        }


# ---------------------------------------------------------------------------
# Core step on spectral coefficients
# ---------------------------------------------------------------------------


class _Stepper:
    """Caches propagator entries for the step sizes in use."""

    def __init__(self, grid: SpectralGrid, spec: NonlinearitySpec, dealias: bool):
        self.grid = grid
        self.spec = spec
        self.dealias = dealias
        self.k2 = np.asarray(grid.k2).reshape(-1)
        self._cache: dict[float, tuple] = {}

    def prop(self, t: float) -> tuple:
        entry = self._cache.get(t)
        if entry is None:
            if len(self._cache) > 16:
                self._cache.clear()
            shape = self.grid.shape
            entry = tuple(e.reshape(shape) for e in state_propagator(t, self.k2))
            self._cache[t] = entry
        return entry

    def advance(self, U: np.ndarray, V: np.ndarray, h: float):
        """One exponential midpoint step; returns ``(U, V, midpoint mass)``."""
        a, b, c, d = self.prop(0.5 * h)
        Um = a * U + b * V
        Vm = c * U + d * V
        if self.spec.is_linear:
            mass = 0.0
        else:
            grid = self.grid
            nvals = self.spec(ifft_values(grid, Um))
            mass = float(np.sum(nvals)) * grid.cell_volume
            nhat = fft_values(grid, nvals)
            if self.dealias:
                nhat = np.where(grid.dealias_mask, nhat, 0.0)
            Vm = Vm + h * nhat
        return a * Um + b * Vm, c * Um + d * Vm, mass


def step(state: WaveState, dt: float, spec: NonlinearitySpec,
         controls: StepControls | None = None) -> WaveState:
    """Advance ``state`` by one exponential midpoint step of size ``dt``."""
    controls = controls or StepControls()
    if not 0 < dt <= controls.dt_max:
        raise ValueError(f"dt must lie in (0, {controls.dt_max}], got {dt}")
    grid = state.grid
    stepper = _Stepper(grid, spec, controls.dealias)
    U, V, _ = stepper.advance(fft_values(grid, state.u.values), fft_values(grid, state.v.values), dt)
    out = state.replace(u=Field(grid, ifft_values(grid, U)), v=Field(grid, ifft_values(grid, V)),
                        t=state.t + dt)
    if not out.is_finite():
        raise FloatingPointError(f"non-finite values after step at t = {state.t}")
    return out


# ---------------------------------------------------------------------------
# Schedules
# ---------------------------------------------------------------------------


def log_schedule(t_first: float, t_last: float, per_decade: int = 20,
                 include_zero: bool = True) -> np.ndarray:
    """Logarithmically spaced snapshot times in ``[t_first, t_last]``."""
    if not 0 < t_first <= t_last:
        raise ValueError("need 0 < t_first <= t_last")
    count = max(2, int(math.ceil(per_decade * math.log10(t_last / t_first))) + 1)
    times = np.geomspace(t_first, t_last, count)
    return np.concatenate([[0.0], times]) if include_zero else times


def _rel_diff(U1, V1, U2, V2) -> float:
    num = np.sum(np.abs(U1 - U2) ** 2) + np.sum(np.abs(V1 - V2) ** 2)
    den = np.sum(np.abs(U2) ** 2) + np.sum(np.abs(V2) ** 2)
    if den == 0:
        return 0.0 if num == 0 else math.inf
    return math.sqrt(num / den)


def evolve(
    state: WaveState,
    T_target: float,
    spec: NonlinearitySpec,
    controls: StepControls | None = None,
    schedule: Sequence[float] | None = None,
    norms: NormRequest | None = None,
    store_fields: bool = False,
    on_snapshot: Callable[[float, Field], None] | None = None,
) -> EvolveOutcome:
    """Integrate from ``state.t`` to ``T_target``.

    Snapshots are taken at the ``schedule`` times lying in
    ``[state.t, T_target]`` (steps are shortened to land on them exactly).
    The run stops early when ``max|u|`` exceeds the blow-up threshold or
    the adaptive step falls below ``dt_min``; the blow-up time is then the
    midpoint of the last accepted step.
    """
    controls = controls or StepControls()
    controls.validate()
    if not T_target >= state.t:
        raise ValueError(f"T_target = {T_target} precedes the state clock {state.t}")
    grid = state.grid
    stepper = _Stepper(grid, spec, controls.dealias)
    threshold = controls.threshold(state)
    t = float(state.t)
    U = fft_values(grid, state.u.values)
    V = fft_values(grid, state.v.values)
    out = EvolveOutcome(status="completed", state=state)

    if schedule is None:
        sched = [t, T_target] if T_target > t else [t]
    else:
        sched = sorted(float(s) for s in schedule if t <= s <= T_target)
    queue = list(sched)

    def record(time: float, Uc: np.ndarray, Vc: np.ndarray) -> None:
        u = Field(grid, ifft_values(grid, Uc))
        out.times.append(time)
        if norms is not None:
            out.snapshots.append(snapshot(time, u, norms.r, norms.s, norms.alpha, norms.m_list))
        if store_fields:
            out.fields.append(u.values.copy())
        if on_snapshot is not None:
            on_snapshot(time, u)

    while queue and queue[0] <= t:
        record(t, U, V)
        queue.pop(0)

    dt = min(controls.dt, controls.dt_max)
    t_prev = t
    while t < T_target:
        target = min(queue[0], T_target) if queue else T_target
        # absorb rounding drift so fixed steps land on the target exactly
        landing = target - t <= dt * (1.0 + 1e-9)
        h = target - t if landing else dt
        if controls.adaptive:
            Ub, Vb, _ = stepper.advance(U, V, h)
            U1, V1, m1 = stepper.advance(U, V, 0.5 * h)
            U2, V2, m2 = stepper.advance(U1, V1, 0.5 * h)
            err = _rel_diff(Ub, Vb, U2, V2)
            finite = bool(np.all(np.isfinite(U2)) and np.all(np.isfinite(V2))) and math.isfinite(err)
            if not finite or err > controls.tol:
                out.rejected += 1
                if finite:
                    fac = max(0.2, controls.safety * (controls.tol / err) ** (1.0 / 3.0))
                else:
                    fac = 0.25
                dt = h * fac
                if dt < controls.dt_min:
                    out.status = "step_floor_hit"
                    break
                continue
            masses = ((t + 0.25 * h, m1), (t + 0.75 * h, m2))
            weight = 0.5 * h
            grow = 2.0 if err == 0 else min(2.0, max(0.2, controls.safety * (controls.tol / err) ** (1.0 / 3.0)))
            # a step clipped to land on a snapshot should not shrink the next one
            new_dt = h * grow
            dt = min(controls.dt_max, max(new_dt, dt) if landing and new_dt >= h else new_dt)
        else:
            U2, V2, m = stepper.advance(U, V, h)
            if not (np.all(np.isfinite(U2)) and np.all(np.isfinite(V2))):
                out.status = "step_floor_hit"
                break
            masses = ((t + 0.5 * h, m),)
            weight = h
        U, V = U2, V2
        t_prev, t = t, (target if landing else t + h)
        out.steps += 1
        if not spec.is_linear:
            for tm, m in masses:
                out.mass_times.append(tm)
                out.masses.append(m)
                out.theta2 += weight * m
        while queue and queue[0] <= t:
            record(t, U, V)
            queue.pop(0)
        if math.isfinite(threshold):
            sup = float(np.max(np.abs(ifft_values(grid, U))))
            out.sup_history.append((t, sup))
            if sup > threshold:
                out.status = "blowup_detected"
                break

    if out.status != "completed":
        out.bracket = (t_prev, t)
        out.blowup_time = 0.5 * (t_prev + t)
    if out.steps:
        out.state = state.replace(
            u=Field(grid, ifft_values(grid, U)), v=Field(grid, ifft_values(grid, V)), t=t
        )
    return out


# ---------------------------------------------------------------------------
# Lifespan surrogate
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LifespanEstimate:
    """Numerical lifespan; ``status`` is ``blowup``, ``no_blowup`` or ``inconclusive``."""

    eps: float
    status: str
    T_num: float | None
    half_width: float | None
    bracket: tuple | None
    t_reached: float
    steps: int

    @property
    def resolved(self) -> bool:
        return self.status == "blowup"

    def to_dict(self) -> dict:
        return {
            "eps": self.eps, "status": self.status, "T_num": self.T_num,
            "half_width": self.half_width, "bracket": list(self.bracket) if self.bracket else None,
            "t_reached": self.t_reached, "steps": self.steps,
        }


def estimate_lifespan(u0: Field, u1: Field, eps: float, spec: NonlinearitySpec,
                      controls: StepControls | None = None,
                      T_budget: float = 1e4) -> LifespanEstimate:
    """Run until the amplitude threshold is crossed or the horizon ``T_budget`` is reached.

    Reaching the horizon only shows ``T(eps) > T_budget``; hitting the step
    floor is reported as inconclusive.
    """
    controls = controls or StepControls()
    state = make_state(u0, u1, eps)
    out = evolve(state, T_budget, spec, controls)
    if out.status == "blowup_detected":
        lo, hi = out.bracket
        return LifespanEstimate(eps, "blowup", 0.5 * (lo + hi), 0.5 * (hi - lo), out.bracket,
                                out.state.t, out.steps)
    if out.status == "completed":
        return LifespanEstimate(eps, "no_blowup", None, None, None, out.state.t, out.steps)
    lo, hi = out.bracket
    return LifespanEstimate(eps, "inconclusive", 0.5 * (lo + hi), 0.5 * (hi - lo), out.bracket,
                            out.state.t, out.steps)
