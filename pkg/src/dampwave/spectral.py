"""Periodic-box discretization and Fourier-multiplier algebra.

The whole space is replaced by the box ``[-L/2, L/2)^n`` sampled on
``N`` points per axis.  Sample ``j`` along an axis sits at
``x_j = -L/2 + j*L/N`` so the origin is the sample with index ``N//2``.

Normalization
-------------
Spectral coefficients approximate the unitary continuous transform

    f_hat(xi) = (2 pi)^{-n/2} \\int f(x) exp(-i x.xi) dx

by the rectangle rule, with the phase referenced to ``x = 0``.  With this
choice the discrete Parseval identity reads

    sum |f_j|^2 dx^n = sum |f_hat_k|^2 dxi^n,   dxi = 2 pi / L.

Multipliers are written as functions of ``xi`` only and never depend on
the normalization constant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

MultiplierLike = Union[np.ndarray, Callable[..., np.ndarray], float]


@dataclass(frozen=True, eq=False)
class SpectralGrid:
    """Uniform periodic grid with precomputed wavenumber and coordinate tables.

    Use :func:`make_grid` to construct one; the arrays are filled in
    ``__post_init__`` and must be treated as read-only.
    """

    n: int
    N: int
    L: float
    xi_axis: np.ndarray = field(init=False, repr=False)
    x_axis: np.ndarray = field(init=False, repr=False)
    xi: tuple = field(init=False, repr=False)
    x: tuple = field(init=False, repr=False)
    k2: np.ndarray = field(init=False, repr=False)
    kabs: np.ndarray = field(init=False, repr=False)
    r2: np.ndarray = field(init=False, repr=False)
    dealias_mask: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        n, N, L = self.n, self.N, float(self.L)
        dx = L / N
        xi_axis = 2.0 * np.pi * np.fft.fftfreq(N, d=dx)
        x_axis = -0.5 * L + dx * np.arange(N)
        shape = (N,) * n
        xi = tuple(
            np.broadcast_to(xi_axis.reshape(_axis_shape(n, j, N)), shape) for j in range(n)
        )
        x = tuple(
            np.broadcast_to(x_axis.reshape(_axis_shape(n, j, N)), shape) for j in range(n)
        )
        k2 = np.zeros(shape)
        r2 = np.zeros(shape)
        for j in range(n):
            k2 = k2 + xi[j] ** 2
            r2 = r2 + x[j] ** 2
        # 2/3 rule: keep integer mode indices |k_j| <= N/3 on every axis
        kint = np.abs(np.fft.fftfreq(N, d=1.0 / N))
        keep_axis = kint <= N / 3.0
        mask = np.ones(shape, dtype=bool)
        for j in range(n):
            mask = mask & keep_axis.reshape(_axis_shape(n, j, N))
        for name, value in (
            ("xi_axis", xi_axis),
            ("x_axis", x_axis),
            ("xi", xi),
            ("x", x),
            ("k2", k2),
            ("kabs", np.sqrt(k2)),
            ("r2", r2),
            ("dealias_mask", mask),
        ):
            if isinstance(value, np.ndarray):
                value.setflags(write=False)
            object.__setattr__(self, name, value)

    @property
    def shape(self) -> tuple:
        return (self.N,) * self.n

    @property
    def dx(self) -> float:
        return self.L / self.N

    @property
    def dxi(self) -> float:
        return 2.0 * np.pi / self.L

    @property
    def cell_volume(self) -> float:
        return self.dx**self.n

    @property
    def volume(self) -> float:
        return float(self.L) ** self.n

    @property
    def nyquist(self) -> float:
        return np.pi * self.N / self.L

    @property
    def transform_scale(self) -> float:
        """Factor turning raw FFT output into unitary-transform samples."""
        return self.cell_volume / (2.0 * np.pi) ** (self.n / 2.0)

    def same_as(self, other: "SpectralGrid") -> bool:
        return self is other or (
            self.n == other.n and self.N == other.N and float(self.L) == float(other.L)
        )

    def describe(self) -> dict:
        return {"n": self.n, "N": self.N, "L": float(self.L)}


def _axis_shape(n: int, j: int, N: int) -> tuple:
    shape = [1] * n
    shape[j] = N
    return tuple(shape)


def make_grid(n: int, N: int, L: float) -> SpectralGrid:
    """Build a periodic grid of ``N**n`` samples on ``[-L/2, L/2)^n``."""
    if n not in (1, 2, 3):
        raise ValueError(f"dimension n must be 1, 2 or 3, got {n}")
    if int(N) != N or N < 8 or N % 2:
        raise ValueError(f"points per axis N must be an even integer >= 8, got {N}")
    if not L > 0:
        raise ValueError(f"box length L must be positive, got {L}")
    return SpectralGrid(int(n), int(N), float(L))


@dataclass(eq=False)
class Field:
    """Real samples of a scalar function on a grid."""

    grid: SpectralGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"field shape {self.values.shape} does not match grid shape {self.grid.shape}"
            )

    @classmethod
    def zeros(cls, grid: SpectralGrid) -> "Field":
        return cls(grid, np.zeros(grid.shape))

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy())

    def __neg__(self) -> "Field":
        return Field(self.grid, -self.values)

    def __add__(self, other: "Field") -> "Field":
        _check_same_grid(self.grid, other.grid)
        return Field(self.grid, self.values + other.values)

    def __sub__(self, other: "Field") -> "Field":
        _check_same_grid(self.grid, other.grid)
        return Field(self.grid, self.values - other.values)

    def __mul__(self, scalar: float) -> "Field":
        return Field(self.grid, self.values * scalar)

    __rmul__ = __mul__


@dataclass(eq=False)
class SpectralField:
    """Fourier coefficients (unitary normalization) of a field."""

    grid: SpectralGrid
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != self.grid.shape:
            raise ValueError(
                f"coefficient shape {self.coeffs.shape} does not match grid {self.grid.shape}"
            )

    def reflected(self) -> np.ndarray:
        """Coefficients re-indexed at ``-k``."""
        c = self.coeffs
        for axis in range(c.ndim):
            c = np.roll(np.flip(c, axis=axis), 1, axis=axis)
        return c

    def hermitian_defect(self) -> float:
        """Max of ``|F(-k) - conj(F(k))|`` relative to the largest coefficient."""
        scale = float(np.max(np.abs(self.coeffs))) or 1.0
        return float(np.max(np.abs(self.reflected() - np.conj(self.coeffs)))) / scale


def _check_same_grid(a: SpectralGrid, b: SpectralGrid) -> None:
    if not a.same_as(b):
        raise ValueError(f"grid mismatch: {a.describe()} vs {b.describe()}")


# Raw-array transforms used by the time stepper; Field wrappers below.
def fft_values(grid: SpectralGrid, values: np.ndarray) -> np.ndarray:
    return np.fft.fftn(np.fft.ifftshift(values)) * grid.transform_scale


def ifft_values(grid: SpectralGrid, coeffs: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(np.fft.ifftn(coeffs / grid.transform_scale).real)


def forward_transform(f: Field, grid: SpectralGrid | None = None) -> SpectralField:
    if grid is not None:
        _check_same_grid(grid, f.grid)
    return SpectralField(f.grid, fft_values(f.grid, f.values))


def inverse_transform(F: SpectralField, grid: SpectralGrid | None = None) -> Field:
    """Back to real samples; the imaginary part (rounding only for Hermitian input) is dropped."""
    if grid is not None:
        _check_same_grid(grid, F.grid)
    return Field(F.grid, ifft_values(F.grid, F.coeffs))


def multiplier_array(grid: SpectralGrid, m: MultiplierLike, **params) -> np.ndarray:
    """Evaluate a multiplier on every grid mode.

    ``m`` may be an array of the grid shape, a scalar, or a callable
    ``m(kabs, **params)`` of the wavenumber magnitude.
    """
    if callable(m):
        values = np.asarray(m(grid.kabs, **params))
    else:
        values = np.asarray(m)
    values = np.broadcast_to(values, grid.shape)
    if not np.all(np.isfinite(values)):
        raise ValueError("multiplier is not finite on every grid mode")
    return values


def apply_multiplier(F: SpectralField, m: MultiplierLike, **params) -> SpectralField:
    """Coefficientwise product of ``F`` with the multiplier ``m``."""
    return SpectralField(F.grid, F.coeffs * multiplier_array(F.grid, m, **params))


def filter_field(f: Field, m: MultiplierLike, **params) -> Field:
    """Apply a multiplier to a real field and return a real field."""
    grid = f.grid
    coeffs = fft_values(grid, f.values) * multiplier_array(grid, m, **params)
    return Field(grid, ifft_values(grid, coeffs))


def fractional_laplacian_power(f: Field, s: float) -> Field:
    """``|nabla|^s f``, i.e. the multiplier ``|xi|^s``."""
    if s < 0:
        raise ValueError(f"order s must be nonnegative, got {s}")
    if s == 0:
        return f.copy()
    return filter_field(f, f.grid.kabs**s)


def directional_fractional(f: Field, axis: int, omega: float) -> Field:
    """``|d_j|^omega f`` with multiplier ``|xi_j|^omega``, ``0 < omega < 1``."""
    if not 0.0 < omega < 1.0:
        raise ValueError(f"omega must lie in (0, 1), got {omega}")
    if not 0 <= axis < f.grid.n:
        raise ValueError(f"axis {axis} out of range for dimension {f.grid.n}")
    return filter_field(f, np.abs(f.grid.xi[axis]) ** omega)


def japanese_bracket(grid: SpectralGrid) -> np.ndarray:
    """``<x> = (1 + |x|^2)^{1/2}`` at the box-centered sample coordinates."""
    return np.sqrt(1.0 + grid.r2)


def weight_multiply(f: Field, alpha: float, homogeneous: bool = False) -> Field:
    """Multiply by ``<x>^alpha`` (or ``|x|^alpha`` when ``homogeneous``).

    Coordinates are the box-centered ones; periodic images are ignored.
    """
    if alpha < 0:
        raise ValueError(f"weight order must be nonnegative, got {alpha}")
    if alpha == 0:
        return f.copy()
    grid = f.grid
    base = np.sqrt(grid.r2) if homogeneous else japanese_bracket(grid)
    return Field(grid, f.values * base**alpha)


def dealias(coeffs: np.ndarray, grid: SpectralGrid) -> np.ndarray:
    """Zero the modes outside the 2/3-rule band."""
    return np.where(grid.dealias_mask, coeffs, 0.0)


def boundary_ratio(f: Field) -> float:
    """Largest magnitude on the box faces relative to the interior peak."""
    values = np.abs(f.values)
    peak = float(values.max())
    if peak == 0.0:
        return 0.0
    edge = 0.0
    for axis in range(values.ndim):
        edge = max(edge, float(np.take(values, 0, axis=axis).max()))
    return edge / peak
