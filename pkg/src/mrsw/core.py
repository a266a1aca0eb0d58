"""Grids, model configuration, topography and primitive-variable helpers.

All arrays are float64. One-dimensional conserved states are stored as
``(6, N)`` arrays ordered ``(h, hu, hv, ha, hb, B)``. Two-dimensional states
are ``(7, Nx, Ny)`` arrays ordered ``(h, hu, hv, ha, hb, A, B)`` with the
first spatial axis along x.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

H_FLOOR = 1e-12

# Component indices shared by the 1-D and 2-D layouts.
IH, IHU, IHV, IHA, IHB = 0, 1, 2, 3, 4
IB_1D = 5
IA_2D, IB_2D = 5, 6


class MRSWError(Exception):
    """Base class for all errors raised by this package."""


class ConfigInvalid(MRSWError, ValueError):
    """A configuration value violates its documented range."""


class DepthTooSmall(MRSWError, ValueError):
    """Water depth at or below the positivity floor."""


class UnknownDescriptor(MRSWError, ValueError):
    """Topography descriptor is not recognised."""


class DegenerateEquilibrium(MRSWError, ValueError):
    """A steady-state profile cannot be built from the given targets."""


@dataclass(frozen=True)
class Grid1D:
    """Uniform cell-centred grid on ``[y_lo, y_hi]``."""

    n: int
    y_lo: float
    y_hi: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 5:
            raise ConfigInvalid(f"need at least 5 cells, got {self.n}")
        if not self.y_hi > self.y_lo:
            raise ConfigInvalid("y_hi must exceed y_lo")

    @property
    def dy(self) -> float:
        return (self.y_hi - self.y_lo) / self.n

    @property
    def centers(self) -> np.ndarray:
        return self.y_lo + (np.arange(self.n, dtype=np.float64) + 0.5) * self.dy

    @property
    def interfaces(self) -> np.ndarray:
        return self.y_lo + np.arange(self.n + 1, dtype=np.float64) * self.dy

    def padded_centers(self, ng: int) -> np.ndarray:
        """Centers including ``ng`` ghost cells on each side."""
        return self.y_lo + (np.arange(-ng, self.n + ng, dtype=np.float64) + 0.5) * self.dy


@dataclass(frozen=True)
class Grid2D:
    """Tensor product of two uniform grids; arrays are indexed ``[j, k]``."""

    x: Grid1D
    y: Grid1D

    @property
    def shape(self) -> tuple[int, int]:
        return (self.x.n, self.y.n)

    @property
    def dx(self) -> float:
        return self.x.dy

    @property
    def dy(self) -> float:
        return self.y.dy

    @property
    def cell_volume(self) -> float:
        return self.dx * self.dy

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x.centers, self.y.centers, indexing="ij")

    def padded_mesh(self, ng: int) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x.padded_centers(ng), self.y.padded_centers(ng), indexing="ij")


def grid_2d(nx: int, ny: int, lo: float, hi: float) -> Grid2D:
    """Square-domain helper."""
    return Grid2D(Grid1D(nx, lo, hi), Grid1D(ny, lo, hi))


# --- topography descriptors -------------------------------------------------


@dataclass(frozen=True)
class Flat:
    level: float = 0.0


@dataclass(frozen=True)
class Gaussian:
    """``amplitude * exp(-(s/width)**2)`` where ``s`` is the distance to ``center``.

    ``axis`` selects the distance: ``"y"`` (or ``"x"``) measures along one
    coordinate, ``"r"`` is the radial distance in 2-D. A scalar ``center``
    applies to both coordinates; a pair is ``(x_c, y_c)``. In 1-D only the
    y entry is used.
    """

    amplitude: float
    center: float | tuple[float, float] = 0.0
    width: float = 1.0
    axis: str = "y"


@dataclass(frozen=True)
class Tabulated:
    """Piecewise-linear profile in y, linearly extrapolated outside the table."""

    coords: tuple[float, ...]
    values: tuple[float, ...]


TopographyDescriptor = Flat | Gaussian | Tabulated


def _tabulated(desc: Tabulated, y: np.ndarray) -> np.ndarray:
    c = np.asarray(desc.coords, dtype=np.float64)
    v = np.asarray(desc.values, dtype=np.float64)
    if c.ndim != 1 or c.size < 2 or c.shape != v.shape or np.any(np.diff(c) <= 0):
        raise UnknownDescriptor("tabulated topography needs >= 2 increasing coords")
    out = np.interp(y, c, v)
    lo, hi = y < c[0], y > c[-1]
    out[lo] = v[0] + (y[lo] - c[0]) * (v[1] - v[0]) / (c[1] - c[0])
    out[hi] = v[-1] + (y[hi] - c[-1]) * (v[-1] - v[-2]) / (c[-1] - c[-2])
    return out


def evaluate_topography(desc: TopographyDescriptor, y: np.ndarray,
                        x: np.ndarray | None = None) -> np.ndarray:
    """Point values of the bottom elevation.

    Args:
        desc: topography descriptor.
        y: y-coordinates.
        x: x-coordinates (2-D only), broadcast against ``y``.
    """
    y = np.asarray(y, dtype=np.float64)
    if x is not None:
        x, y = np.broadcast_arrays(np.asarray(x, dtype=np.float64), y)
    if isinstance(desc, Flat):
        return np.full(y.shape, float(desc.level))
    if isinstance(desc, Gaussian):
        if desc.width <= 0:
            raise UnknownDescriptor("gaussian width must be positive")
        if isinstance(desc.center, tuple):
            cx, cy = (float(c) for c in desc.center)
        else:
            cx = cy = float(desc.center)
        if x is None:
            s2 = ((y - cy) / desc.width) ** 2
        elif desc.axis == "y":
            s2 = ((y - cy) / desc.width) ** 2
        elif desc.axis == "x":
            s2 = ((x - cx) / desc.width) ** 2
        elif desc.axis == "r":
            s2 = ((x - cx) ** 2 + (y - cy) ** 2) / desc.width**2
        else:
            raise UnknownDescriptor(f"unknown gaussian axis {desc.axis!r}")
        return desc.amplitude * np.exp(-s2)
    if isinstance(desc, Tabulated):
        return _tabulated(desc, y)
    raise UnknownDescriptor(f"unknown topography descriptor {desc!r}")


@dataclass(frozen=True)
class ModelConfig:
    """Physical and numerical parameters.

    Attributes:
        g: gravity.
        f_c: Coriolis parameter at y = 0.
        beta: linear Coriolis variation, f = f_c + beta * y.
        theta: generalized minmod parameter in [1, 2].
        cfl: CFL number in (0, 0.5].
        variant: ``"WB"`` (equilibrium reconstruction) or ``"NWB"``.
        topography: bottom descriptor.
    """

    g: float = 1.0
    f_c: float = 0.0
    beta: float = 0.0
    theta: float = 1.3
    cfl: float = 0.25
    variant: str = "WB"
    topography: TopographyDescriptor = field(default_factory=Flat)

    def __post_init__(self):
        if not (math.isfinite(self.g) and self.g > 0):
            raise ConfigInvalid("g must be positive")
        if not (math.isfinite(self.f_c) and math.isfinite(self.beta)):
            raise ConfigInvalid("Coriolis parameters must be finite")
        if not 1.0 <= self.theta <= 2.0:
            raise ConfigInvalid("theta must lie in [1, 2]")
        if not 0.0 < self.cfl <= 0.5:
            raise ConfigInvalid("cfl must lie in (0, 0.5]")
        if self.variant not in ("WB", "NWB"):
            raise ConfigInvalid("variant must be 'WB' or 'NWB'")
        if not isinstance(self.topography, (Flat, Gaussian, Tabulated)):
            raise UnknownDescriptor(f"unknown topography descriptor {self.topography!r}")


def coriolis_at(cfg: ModelConfig, y):
    """Coriolis parameter ``f_c + beta * y``."""
    return cfg.f_c + cfg.beta * np.asarray(y, dtype=np.float64)


@dataclass(frozen=True)
class Topography1D:
    """Bottom sampled at cell centers, ghost centers and interfaces."""

    descriptor: TopographyDescriptor
    grid: Grid1D
    ng: int
    padded: np.ndarray
    interfaces: np.ndarray

    @property
    def centers(self) -> np.ndarray:
        return self.padded[self.ng:-self.ng]


@dataclass(frozen=True)
class Topography2D:
    descriptor: TopographyDescriptor
    grid: Grid2D
    ng: int
    padded: np.ndarray

    @property
    def centers(self) -> np.ndarray:
        g = self.ng
        return self.padded[g:-g, g:-g]


def topography_profile(desc: TopographyDescriptor, grid: Grid1D | Grid2D,
                       ng: int = 3) -> Topography1D | Topography2D:
    """Sample the bottom analytically on a grid including ``ng`` ghost layers."""
    if isinstance(grid, Grid1D):
        padded = evaluate_topography(desc, grid.padded_centers(ng))
        faces = evaluate_topography(desc, grid.interfaces)
        return Topography1D(desc, grid, ng, padded, faces)
    if isinstance(grid, Grid2D):
        xx, yy = grid.padded_mesh(ng)
        return Topography2D(desc, grid, ng, evaluate_topography(desc, yy, xx))
    raise TypeError("grid must be Grid1D or Grid2D")


def primitives_from_conserved(w: np.ndarray) -> dict[str, np.ndarray]:
    """Velocities and magnetic field from a conserved state.

    Works for both layouts; raises ``DepthTooSmall`` when ``h <= 1e-12``.
    """
    h = w[IH]
    if np.any(~(h > H_FLOOR)):
        raise DepthTooSmall(f"minimum depth {np.nanmin(h):.3e} at or below floor")
    out = {"h": h, "u": w[IHU] / h, "v": w[IHV] / h, "a": w[IHA] / h, "b": w[IHB] / h}
    if w.ndim == 2:
        out["B"] = w[IB_1D]
    else:
        out["A"] = w[IA_2D]
        out["B"] = w[IB_2D]
    return out


def conserved_from_primitives(h, u, v, a, b, *magnetic) -> np.ndarray:
    """Stack ``(h, hu, hv, ha, hb, *magnetic)`` into a float64 state array."""
    h = np.asarray(h, dtype=np.float64)
    comps = [h, h * u, h * v, h * a, h * b] + [np.broadcast_to(np.asarray(m, dtype=np.float64), h.shape)
                                               for m in magnetic]
    return np.stack([np.broadcast_to(c, h.shape).astype(np.float64) for c in comps])

