"""Pseudospectral simulation and verification toolkit for the damped wave
equation ``u_tt - Laplacian u + u_t = N(u)`` on a periodic box."""

from .initial_data import DataProfile, class_report, make_data
from .integrator import (
    NonlinearitySpec,
    StepControls,
    WaveState,
    estimate_lifespan,
    evolve,
    make_state,
    step,
)
from .norms import derive_table2, fit_rate, lp_norm, sobolev_seminorm, weighted_l2
from .spectral import Field, SpectralField, SpectralGrid, make_grid

__version__ = "0.1.0"

__all__ = [
    "DataProfile",
    "Field",
    "NonlinearitySpec",
    "SpectralField",
    "SpectralGrid",
    "StepControls",
    "WaveState",
    "class_report",
    "derive_table2",
    "estimate_lifespan",
    "evolve",
    "fit_rate",
    "lp_norm",
    "make_data",
    "make_grid",
    "make_state",
    "sobolev_seminorm",
    "step",
    "weighted_l2",
]
