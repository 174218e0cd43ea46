"""Plain forward runs with norm monitoring."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from ..config import RunConfig
from ..initial_data import make_data
from ..integrator import NormRequest, evolve, log_schedule, make_state
from ..norms import XNormTracker
from ..spectral import make_grid


@dataclass
class SimulationReport:
    config: RunConfig
    snapshots: list
    outcome: dict
    x_norm: float
    m_list: tuple = ()

    kind = "simulate"

    @property
    def passed(self) -> bool:
        return self.outcome["status"] in ("completed", "blowup_detected")

    def summary(self) -> dict:
        return {"outcome": self.outcome, "x_norm": self.x_norm}


def run_simulation(cfg: RunConfig) -> SimulationReport:
    pb, eb = cfg.problem, cfg.experiment
    grid = make_grid(pb.n, cfg.grid.N, cfg.grid.L)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        u0, u1 = make_data(cfg.profile(), grid)
    m_list = tuple(eb.m_list)
    out = evolve(make_state(u0, u1, pb.eps), eb.T, cfg.nonlinearity(), cfg.step_controls(),
                 schedule=log_schedule(eb.t_first, eb.T, eb.per_decade),
                 norms=NormRequest(pb.r, pb.s, pb.alpha, m_list))
    tracker = XNormTracker()
    for snap in out.snapshots:
        tracker.update(snap)
    return SimulationReport(cfg, out.snapshots, out.summary(), tracker.value, m_list)
