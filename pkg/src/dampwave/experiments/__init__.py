"""Numerical experiments built on the solver."""

from .decay import DecayReport, decay_experiment, effective_r
from .fractional import fractional_check, fractional_constant
from .lifespan import LifespanReport, SweepError, lifespan_sweep
from .ode import ode_blowup_time, ode_oracle
from .profile import ProfileReport, d_minus_g_check, diffusion_profile_experiment, heat_kernel
from .testfunction import TestFunctionReport, testfunction_bound
from .theory import TheoryRates, format_rates, theory_rates

__all__ = [
    "DecayReport",
    "LifespanReport",
    "ProfileReport",
    "SweepError",
    "TestFunctionReport",
    "TheoryRates",
    "d_minus_g_check",
    "decay_experiment",
    "diffusion_profile_experiment",
    "effective_r",
    "format_rates",
    "fractional_check",
    "fractional_constant",
    "heat_kernel",
    "lifespan_sweep",
    "ode_blowup_time",
    "ode_oracle",
    "testfunction_bound",
    "theory_rates",
]
