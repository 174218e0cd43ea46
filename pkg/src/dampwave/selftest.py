"""Fast invariant checks runnable from the command line without pytest."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .integrator import LINEAR, NonlinearitySpec, StepControls, evolve, make_state
from .norms import derive_table2, lp_norm
from .propagators import eval_L, propagate_coeffs, state_propagator
from .spectral import Field, fft_values, make_grid


def _series_L(t: float, z: float) -> float:
    w = t * t * z
    return t * (1 + w / 6 + w * w / 120 + w**3 / 5040)


def check_kernel_continuity(rng) -> str | None:
    for t in (20.0, 50.0):
        for z in (1e-6, -1e-6):
            got = float(eval_L(t, 0.25 - z))
            want = _series_L(t, z)
            if abs(got - want) > 1e-12 * abs(want):
                return f"L({t}) at z = {z}: {got!r} vs series {want!r}"
    return None


def check_determinant(rng) -> str | None:
    k2 = rng.uniform(0, 50, 64)
    for t in (0.3, 7.0, 90.0):
        a, b, c, d = state_propagator(t, k2)
        dev = np.max(np.abs(a * d - b * c - math.exp(-t)))
        if dev > 1e-12:
            return f"determinant off by {dev:.2e} at t = {t}"
    return None


def check_semigroup(rng) -> str | None:
    grid = make_grid(1, 64, 20.0)
    U = fft_values(grid, rng.standard_normal(grid.shape))
    V = fft_values(grid, rng.standard_normal(grid.shape))
    U1, V1 = propagate_coeffs(2.5, grid, *propagate_coeffs(1.5, grid, U, V))
    U2, V2 = propagate_coeffs(4.0, grid, U, V)
    dev = max(np.max(np.abs(U1 - U2)), np.max(np.abs(V1 - V2))) / max(np.max(np.abs(U)), 1)
    return None if dev < 1e-10 else f"semigroup defect {dev:.2e}"


def check_parseval(rng) -> str | None:
    grid = make_grid(2, 32, 10.0)
    f = Field(grid, rng.standard_normal(grid.shape))
    a = lp_norm(f, 2)
    b = math.sqrt(float(np.sum(np.abs(fft_values(grid, f.values)) ** 2)) * grid.dxi**2)
    return None if abs(a - b) <= 1e-12 * a else f"Parseval mismatch {a} vs {b}"


def check_zero_data(rng) -> str | None:
    grid = make_grid(1, 64, 40.0)
    z = Field.zeros(grid)
    out = evolve(make_state(z, z), 5.0, NonlinearitySpec("abs_power", 2.0), StepControls())
    if out.status != "completed" or np.any(out.state.u.values != 0):
        return "zero data did not stay zero"
    return None


def check_sign_symmetry(rng) -> str | None:
    grid = make_grid(1, 64, 40.0)
    u0 = Field(grid, np.exp(-grid.r2))
    u1 = Field(grid, 0.3 * np.exp(-0.5 * grid.r2))
    spec = NonlinearitySpec("signed_power", 3.0)
    ctl = StepControls(adaptive=False, dt=0.05)
    a = evolve(make_state(u0, u1), 2.0, spec, ctl).state.u.values
    b = evolve(make_state(-u0, -u1), 2.0, spec, ctl).state.u.values
    dev = float(np.max(np.abs(a + b)))
    return None if dev <= 1e-14 * max(1.0, float(np.max(np.abs(a)))) else f"odd symmetry defect {dev:.2e}"


def check_linear_consistency(rng) -> str | None:
    grid = make_grid(1, 128, 60.0)
    u0 = Field(grid, np.exp(-grid.r2))
    out = evolve(make_state(u0, Field.zeros(grid)), 10.0, LINEAR, StepControls(dt=0.7))
    U, _ = propagate_coeffs(10.0, grid, fft_values(grid, u0.values), np.zeros(grid.shape))
    ref = fft_values(grid, out.state.u.values)
    dev = float(np.max(np.abs(ref - U)))
    return None if dev < 1e-12 else f"linear run deviates by {dev:.2e}"


def check_table(rng) -> str | None:
    t = derive_table2(2, 3.0, 1.0, 1.0, 1.2)
    if abs(t.zeta - 1.4) > 1e-14 or t.q != 1.0 or t.mu != 0.5:
        return f"parameter table mismatch: zeta = {t.zeta}, q = {t.q}, mu = {t.mu}"
    return None


CHECKS: dict[str, Callable] = {
    "kernel continuity": check_kernel_continuity,
    "propagator determinant": check_determinant,
    "semigroup composition": check_semigroup,
    "Parseval identity": check_parseval,
    "zero data stays zero": check_zero_data,
    "odd nonlinearity symmetry": check_sign_symmetry,
    "linear consistency": check_linear_consistency,
    "parameter table": check_table,
}


def run_selftest(seed: int = 0, report: Callable[[str], None] | None = None) -> bool:
    rng = np.random.default_rng(seed)
    ok = True
    for name, check in CHECKS.items():
        try:
            problem = check(rng)
        except Exception as exc:  # a crash is a failed check, not a crashed selftest
            problem = f"raised {type(exc).__name__}: {exc}"
        ok &= problem is None
        if report is not None:
            report(f"{'PASS' if problem is None else 'FAIL'} {name}" + (f": {problem}" if problem else ""))
    return ok
