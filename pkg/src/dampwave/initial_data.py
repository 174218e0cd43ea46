"""Initial-data profiles and box-based class-membership diagnostics."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .norms import inhomogeneous_sobolev, lp_norm, weighted_l2
from .spectral import Field, SpectralGrid, filter_field

KINDS = ("gaussian", "power_decay", "bump", "uniform")
EDGE_DECAY = 1e-10


@dataclass(frozen=True)
class DataProfile:
    """Radial data profile and how it is split between ``u0`` and ``u1``.

    Parameters
    ----------
    kind
        ``gaussian`` (width ``sigma``), ``power_decay`` (``|x|^{-lam}`` outside
        a core of radius ``core``), ``bump`` (support radius ``radius``) or
        ``uniform`` (constant ``c``).
    amplitude
        Overall factor applied to the shape.
    u0_weight, u1_weight
        The data are ``u0 = u0_weight * shape`` and ``u1 = u1_weight * shape``.
    mollify
        Width of an optional Gaussian spectral mollifier; ``0`` disables it.
    """

    kind: str = "gaussian"
    sigma: float = 1.0
    lam: float = 1.8
    core: float = 1.0
    radius: float = 1.0
    c: float = 1.0
    amplitude: float = 1.0
    u0_weight: float = 1.0
    u1_weight: float = 0.0
    mollify: float = 0.0

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}; expected one of {KINDS}")
        if self.kind == "gaussian" and not self.sigma > 0:
            raise ValueError(f"gaussian width sigma must be positive, got {self.sigma}")
        if self.kind == "power_decay":
            if not self.lam > 0:
                raise ValueError(f"decay exponent lam must be positive, got {self.lam}")
            if not self.core > 0:
                raise ValueError(f"core radius must be positive, got {self.core}")
        if self.kind == "bump" and not self.radius > 0:
            raise ValueError(f"bump radius must be positive, got {self.radius}")
        if self.mollify < 0:
            raise ValueError(f"mollifier width must be nonnegative, got {self.mollify}")


def power_core_coefficients(lam: float) -> tuple[float, float, float]:
    """``(a, b, c)`` of the core polynomial ``a + b rho^2 + c rho^4``.

    It matches ``rho^{-lam}`` with two derivatives at ``rho = 1`` and is
    positive and decreasing on ``[0, 1]``.
    """
    c = lam * (lam + 2.0) / 8.0
    b = -0.5 * lam - 2.0 * c
    return 1.0 - b - c, b, c


def radial_shape(profile: DataProfile, r: np.ndarray) -> np.ndarray:
    """Unit-amplitude profile evaluated at radii ``r``."""
    kind = profile.kind
    if kind == "gaussian":
        return np.exp(-0.5 * (r / profile.sigma) ** 2)
    if kind == "uniform":
        return np.full_like(r, profile.c, dtype=float)
    if kind == "bump":
        rho2 = (r / profile.radius) ** 2
        out = np.zeros_like(r, dtype=float)
        inside = rho2 < 1.0
        out[inside] = np.exp(1.0 - 1.0 / (1.0 - rho2[inside]))
        return out
    rho = r / profile.core
    a, b, c = power_core_coefficients(profile.lam)
    out = np.empty_like(r, dtype=float)
    inner = rho <= 1.0
    w = rho[inner] ** 2
    out[inner] = a + b * w + c * w * w
    out[~inner] = rho[~inner] ** (-profile.lam)
    return out * profile.core ** (-profile.lam)


def make_data(profile: DataProfile, grid: SpectralGrid) -> tuple[Field, Field]:
    """Sample ``(u0, u1)`` for ``profile`` on the box-centered coordinates."""
    shape = radial_shape(profile, np.sqrt(grid.r2)) * profile.amplitude
    if profile.kind in ("gaussian", "bump"):
        peak = float(np.max(np.abs(shape)))
        edge = _edge_max(shape)
        if peak > 0 and edge > EDGE_DECAY * peak:
            raise ValueError(
                f"{profile.kind} profile is {edge / peak:.2e} of its peak at the box edge; "
                f"enlarge L (currently {grid.L}) or narrow the profile"
            )
    elif profile.kind == "power_decay":
        warnings.warn(
            "power_decay data are truncated by the box; edge value "
            f"{(0.5 * grid.L) ** -profile.lam:.2e}",
            stacklevel=2,
        )
    base = Field(grid, shape)
    if profile.mollify > 0:
        width = profile.mollify
        base = filter_field(base, np.exp(-0.5 * width * width * grid.k2))
    return base * profile.u0_weight, base * profile.u1_weight


def _edge_max(values: np.ndarray) -> float:
    a = np.abs(values)
    return max(float(np.take(a, 0, axis=ax).max()) for ax in range(a.ndim))


# ---------------------------------------------------------------------------
# Class-membership report
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldClassReport:
    """Norms on the box and tail-growth diagnostics for one data slot.

    ``*_exponent`` is ``log2`` of the ratio of the integral's increments over
    the shells ``L/4 < |x|_inf < L/2`` and ``L/8 < |x|_inf < L/4``.  A tail
    ``|x|^{-g}`` of the integrand gives ``n - g``, which is negative exactly
    when the whole-space integral converges.
    """

    hs_norm: float
    weighted_norm: float
    lr_norm: float
    lr_exponent: float
    weighted_exponent: float
    lr_box_ratio: float
    weighted_box_ratio: float
    lr_divergent: bool
    weighted_divergent: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass(frozen=True)
class ClassReport:
    slots: dict

    @property
    def divergent(self) -> bool:
        return any(rep.lr_divergent or rep.weighted_divergent for rep in self.slots.values())

    def to_dict(self) -> dict:
        return {name: rep.to_dict() for name, rep in self.slots.items()}


def _box_integrals(density: np.ndarray, grid: SpectralGrid, fractions=(1.0, 0.5, 0.25)) -> list[float]:
    sup = np.zeros(grid.shape)
    for xj in grid.x:
        sup = np.maximum(sup, np.abs(xj))
    out = []
    for frac in fractions:
        inside = sup < 0.5 * grid.L * frac
        out.append(float(np.sum(density[inside])) * grid.cell_volume)
    return out


def _growth_exponent(q: list[float], rel_floor: float = 1e-13) -> float:
    d1, d2 = q[0] - q[1], q[1] - q[2]
    if d1 <= rel_floor * q[0] or d2 <= rel_floor * q[0]:
        return -math.inf
    return math.log2(d1 / d2)


def _slot_report(f: Field, s: float, alpha: float, r: float, margin: float) -> FieldClassReport:
    grid = f.grid
    a = np.abs(f.values)
    lr_q = _box_integrals(a**r, grid)
    bracket2 = (1.0 + grid.r2) ** alpha
    w_q = _box_integrals(bracket2 * a * a, grid)
    lr_exp = _growth_exponent(lr_q)
    w_exp = _growth_exponent(w_q)
    lr_ratio = (lr_q[0] / lr_q[1]) ** (1.0 / r) if lr_q[1] > 0 else 1.0
    w_ratio = math.sqrt(w_q[0] / w_q[1]) if w_q[1] > 0 else 1.0
    return FieldClassReport(
        hs_norm=inhomogeneous_sobolev(f, s),
        weighted_norm=weighted_l2(f, alpha, homogeneous=False),
        lr_norm=lp_norm(f, r),
        lr_exponent=lr_exp,
        weighted_exponent=w_exp,
        lr_box_ratio=lr_ratio,
        weighted_box_ratio=w_ratio,
        lr_divergent=lr_exp > -margin,
        weighted_divergent=w_exp > -margin,
    )


def class_report(u0: Field, u1: Field, s: float, alpha: float, r: float,
                 grid: SpectralGrid | None = None, margin: float = 0.05) -> ClassReport:
    """Box norms of the data and flags for tails that make the whole-space norm infinite.

    Only nonzero slots are reported.  ``margin`` is the tolerance on the
    tail exponent: a slot is flagged when its exponent exceeds ``-margin``.
    """
    if grid is not None and not (u0.grid.same_as(grid) and u1.grid.same_as(grid)):
        raise ValueError("data fields do not live on the given grid")
    slots = {}
    for name, f in (("u0", u0), ("u1", u1)):
        if np.any(f.values != 0):
            slots[name] = _slot_report(f, s, alpha, r, margin)
    return ClassReport(slots)
