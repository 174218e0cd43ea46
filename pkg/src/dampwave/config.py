"""Run configuration: TOML parsing, validation and a canonical dump.

Grammar
-------
A config is a TOML document with the flat sections ``[problem]``,
``[grid]``, ``[data]``, ``[controls]``, ``[experiment]`` and ``[output]``.
Values are scalars or flat lists.  Every section and key is optional;
omitted keys take the defaults of the dataclasses below.
"""

from __future__ import annotations

import dataclasses
import math
import sys
from dataclasses import dataclass, field, fields

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .initial_data import KINDS, DataProfile
from .integrator import FORMS, NonlinearitySpec, StepControls
from .norms import ParameterError, derive_table2

EXPERIMENT_KINDS = ("simulate", "decay", "profile", "lifespan")


class ConfigError(ValueError):
    """All problems found in a config, syntax or semantic."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("\n".join(self.violations))


@dataclass(frozen=True)
class ProblemBlock:
    n: int = 1
    p: float = 2.0
    form: str = "abs_power"
    coefficient: float = 1.0
    r: float = 1.0
    s: float = 0.5
    alpha: float = 0.6
    lam: float | None = None
    eps: float = 1.0


@dataclass(frozen=True)
class GridBlock:
    N: int = 1024
    L: float = 200.0


@dataclass(frozen=True)
class DataBlock:
    kind: str = "gaussian"
    sigma: float = 1.0
    core: float = 1.0
    radius: float = 1.0
    c: float = 1.0
    amplitude: float = 1.0
    u0_weight: float = 1.0
    u1_weight: float = 0.0
    mollify: float = 0.0


@dataclass(frozen=True)
class ControlsBlock:
    dt: float = 0.05
    safety: float = 0.9
    dt_max: float = 1.0
    dt_min: float = 1e-9
    tol: float = 1e-7
    m_blow: float | None = None
    blow_factor: float = 1e6
    dealias: bool = True
    adaptive: bool = True


@dataclass(frozen=True)
class ExperimentBlock:
    kind: str = "simulate"
    T: float = 100.0
    t_first: float = 1.0
    per_decade: int = 20
    fit_window: tuple | None = None
    eps_list: tuple = ()
    m_list: tuple = (2.0,)
    slack: float = 0.1
    tolerance: float = 0.05
    weighted_tolerance: float = 0.07
    T_budget: float = 1e4


@dataclass(frozen=True)
class OutputBlock:
    dir: str = "out"


SECTIONS = {
    "problem": ProblemBlock,
    "grid": GridBlock,
    "data": DataBlock,
    "controls": ControlsBlock,
    "experiment": ExperimentBlock,
    "output": OutputBlock,
}


@dataclass(frozen=True)
class RunConfig:
    problem: ProblemBlock = field(default_factory=ProblemBlock)
    grid: GridBlock = field(default_factory=GridBlock)
    data: DataBlock = field(default_factory=DataBlock)
    controls: ControlsBlock = field(default_factory=ControlsBlock)
    experiment: ExperimentBlock = field(default_factory=ExperimentBlock)
    output: OutputBlock = field(default_factory=OutputBlock)

    # -- conversions to the library objects --------------------------------
    def nonlinearity(self) -> NonlinearitySpec:
        pb = self.problem
        return NonlinearitySpec(pb.form, pb.p, None, pb.coefficient)

    def step_controls(self) -> StepControls:
        return StepControls(**dataclasses.asdict(self.controls))

    def profile(self) -> DataProfile:
        kw = dataclasses.asdict(self.data)
        if self.problem.lam is not None:
            kw["lam"] = self.problem.lam
        return DataProfile(**kw)

    def table(self):
        pb = self.problem
        return derive_table2(pb.n, pb.p, pb.r, pb.s, pb.alpha)

    def replace(self, section: str, **changes) -> "RunConfig":
        """Copy with keys of one section changed."""
        block = dataclasses.replace(getattr(self, section), **changes)
        return dataclasses.replace(self, **{section: block})

    def to_dict(self) -> dict:
        return {name: _block_dict(getattr(self, name)) for name in SECTIONS}


def _block_dict(block) -> dict:
    out = {}
    for f in fields(block):
        value = getattr(block, f.name)
        out[f.name] = list(value) if isinstance(value, tuple) else value
    return out


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def _coerce(section: str, key: str, default, value, problems: list):
    where = f"[{section}] {key}"
    if isinstance(default, bool):
        if not isinstance(value, bool):
            problems.append(f"{where}: expected true/false, got {value!r}")
        return value
    if isinstance(default, tuple) or key in ("fit_window",):
        if not isinstance(value, list):
            problems.append(f"{where}: expected a list, got {value!r}")
            return value
        if any(isinstance(v, (bool, str, list, dict)) for v in value):
            problems.append(f"{where}: list entries must be numbers")
            return value
        return tuple(float(v) for v in value)
    if isinstance(default, str):
        if not isinstance(value, str):
            problems.append(f"{where}: expected a string, got {value!r}")
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            problems.append(f"{where}: expected an integer, got {value!r}")
        return value
    # float or optional float
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        problems.append(f"{where}: expected a number, got {value!r}")
        return value
    return float(value)


def parse_config(text: str) -> RunConfig:
    """Parse and validate a config; raises :class:`ConfigError` listing every problem."""
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError([f"syntax error: {exc}"]) from None
    problems: list[str] = []
    blocks = {}
    for section, value in raw.items():
        if section not in SECTIONS:
            problems.append(f"unknown section [{section}]")
        elif not isinstance(value, dict):
            problems.append(f"{section} must be a section, not a value")
    for section, cls in SECTIONS.items():
        given = raw.get(section, {})
        if not isinstance(given, dict):
            continue
        defaults = cls()
        kwargs = {}
        names = {f.name for f in fields(cls)}
        for key, value in given.items():
            if key not in names:
                problems.append(f"[{section}] unknown key {key!r}")
                continue
            if isinstance(value, dict):
                problems.append(f"[{section}] {key}: nested tables are not allowed")
                continue
            kwargs[key] = _coerce(section, key, getattr(defaults, key), value, problems)
        try:
            blocks[section] = cls(**kwargs)
        except TypeError as exc:
            problems.append(f"[{section}] {exc}")
    if problems:
        raise ConfigError(problems)
    cfg = RunConfig(**blocks)
    problems.extend(validate(cfg))
    if problems:
        raise ConfigError(problems)
    return cfg


def validate(cfg: RunConfig) -> list[str]:
    """Semantic checks; returns the list of violations (empty when valid)."""
    out = []
    pb, gb, eb, cb, db = cfg.problem, cfg.grid, cfg.experiment, cfg.controls, cfg.data
    if pb.n not in (1, 2, 3):
        out.append(f"[problem] n must be 1, 2 or 3 (got {pb.n})")
    if pb.form not in FORMS:
        out.append(f"[problem] form must be one of {FORMS} (got {pb.form!r})")
    if pb.lam is not None and not pb.lam > 0:
        out.append(f"[problem] lam must be positive (got {pb.lam})")
    if pb.n in (1, 2, 3):
        try:
            derive_table2(pb.n, pb.p, pb.r, pb.s, pb.alpha)
        except ParameterError as exc:
            out.extend(f"[problem] {v}" for v in exc.violations)
    if gb.N < 8 or gb.N % 2:
        out.append(f"[grid] N must be an even integer >= 8 (got {gb.N})")
    if not gb.L > 0:
        out.append(f"[grid] L must be positive (got {gb.L})")
    if db.kind not in KINDS:
        out.append(f"[data] kind must be one of {KINDS} (got {db.kind!r})")
    if db.kind == "power_decay" and pb.lam is None:
        out.append("[data] power_decay data need [problem] lam")
    if not 0 < cb.dt_min < cb.dt_max:
        out.append(f"[controls] need 0 < dt_min < dt_max (got {cb.dt_min}, {cb.dt_max})")
    if cb.m_blow is not None and not cb.m_blow > 0:
        out.append(f"[controls] m_blow must be positive (got {cb.m_blow})")
    if eb.kind not in EXPERIMENT_KINDS:
        out.append(f"[experiment] kind must be one of {EXPERIMENT_KINDS} (got {eb.kind!r})")
    if not eb.T > 0:
        out.append(f"[experiment] T must be positive (got {eb.T})")
    if eb.fit_window is not None:
        if len(eb.fit_window) != 2 or not 0 < eb.fit_window[0] < eb.fit_window[1]:
            out.append(f"[experiment] fit_window must be [t_min, t_max] with 0 < t_min < t_max")
    if any(not e > 0 for e in eb.eps_list):
        out.append("[experiment] eps_list entries must be positive")
    if any(not (m >= 1) for m in eb.m_list):
        out.append("[experiment] m_list entries must be >= 1")
    if eb.per_decade < 1:
        out.append(f"[experiment] per_decade must be >= 1 (got {eb.per_decade})")
    return out


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


# ---------------------------------------------------------------------------
# Canonical dump
# ---------------------------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if math.isnan(value):
            return "nan"
        return repr(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    raise TypeError(f"cannot serialize {value!r}")


def dump_config(cfg: RunConfig) -> str:
    """TOML text that :func:`parse_config` maps back to an equal config.

    Unset optional values are omitted.
    """
    lines = []
    for name in SECTIONS:
        lines.append(f"[{name}]")
        for key, value in _block_dict(getattr(cfg, name)).items():
            if value is None:
                continue
            lines.append(f"{key} = {_fmt(value)}")
        lines.append("")
    return "\n".join(lines)
