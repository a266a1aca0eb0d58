"""Initial/boundary setups for the eight reference experiments.

Every setup uses ``g = 1``, ``theta = 1.3`` and CFL 0.25 unless overridden.
1-D examples live on ``y``; 2-D examples on ``[-10, 10]^2``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import numpy as np

from . import solver1d as s1
from . import solver2d as s2
from .core import (Flat, Gaussian, Grid1D, MRSWError, ModelConfig, conserved_from_primitives,
                   grid_2d, primitives_from_conserved, topography_profile)
from .timeint import max_dt


class ComplexRoot(MRSWError, ValueError):
    """The cyclo-geostrophic balance has no real solution."""


@dataclass
class Problem:
    """A ready-to-run setup."""

    example: int
    dim: int
    grid: object
    cfg: ModelConfig
    topo: object
    W0: np.ndarray
    bc: object
    t_end: float
    snapshot_times: tuple[float, ...] = ()
    reference: np.ndarray | None = None
    label: str = ""
    extra: dict = field(default_factory=dict)

    def rhs_and_speeds(self, w):
        if self.dim == 1:
            return s1.rhs_and_speeds_1d(w, self.topo, self.cfg, self.bc)
        return s2.rhs_and_speeds_2d(w, self.topo, self.cfg, self.bc)

    def rhs_and_dt(self, w):
        rhs, speeds = self.rhs_and_speeds(w)
        spacing = self.grid.dy if self.dim == 1 else (self.grid.dx, self.grid.dy)
        return rhs, max_dt(speeds, spacing, self.cfg.cfl)


def balanced_vortex_velocity(r, f: float, g: float, dphi_dr) -> np.ndarray:
    """Regular root of ``V^2/r + f V = g dphi/dr``.

    Uses ``V = 2 g phi' / (f + sign(f) sqrt(f^2 + 4 g phi'/r))``, the
    cancellation-free form of ``r(-f + sqrt(f^2 + 4 g phi'/r))/2``; ``V = 0``
    at ``r = 0``.
    """
    r = np.asarray(r, dtype=np.float64)
    dphi = np.broadcast_to(np.asarray(dphi_dr, dtype=np.float64), r.shape)
    pos = r > 0
    ratio = np.where(pos, dphi / np.where(pos, r, 1.0), 0.0)
    disc = f * f + 4.0 * g * ratio
    if np.any(disc < 0):
        raise ComplexRoot("negative discriminant in the balance equation")
    root = np.sqrt(disc)
    if f != 0.0:
        denom = f + np.copysign(root, f)
        return np.where(pos, 2.0 * g * dphi / denom, 0.0)
    # f = 0: V^2 = g r phi'; pick the sign of phi'.
    return np.where(pos, np.sign(dphi) * np.sqrt(np.abs(g * r * dphi)), 0.0)


def _cfg(overrides: dict, **base) -> ModelConfig:
    merged = {"g": 1.0, "theta": 1.3, "cfl": 0.25, **base}
    merged.update({k: v for k, v in overrides.items() if v is not None})
    return ModelConfig(**merged)


_STEADY_1D = s1.SteadyTargets1D(hv=0.5, E=1.0, hb=3.0, u_c=0.3, a_c=2.0)


def _example_1d_steady(example, n, ov, perturb):
    base = {"f_c": 1.0, "beta": 0.0} if example == 1 else {"f_c": 0.0, "beta": 0.1}
    cfg = _cfg(ov, topography=Gaussian(0.5, 0.0, 1.0), **base)
    grid = Grid1D(n, -10.0, 10.0)
    topo = topography_profile(cfg.topography, grid, s1.NG)
    W, bc = s1.steady_state_discrete(cfg, grid, _STEADY_1D, topo)
    ref = W.copy()
    if perturb:
        p = primitives_from_conserved(W)
        bump = np.where(np.abs(grid.centers + 2.0) < 0.25, 1e-3, 0.0)
        W = conserved_from_primitives(p["h"] + bump, p["u"], p["v"], p["a"], p["b"], p["B"])
    return cfg, grid, topo, W, bc, ref


def _example_1d_adjust(example, n, ov):
    cfg = _cfg(ov, f_c=1.0, beta=0.0, topography=Flat())
    grid = Grid1D(n, -200.0, 200.0)
    topo = topography_profile(cfg.topography, grid, s1.NG)

    if example == 3:
        def u0(y):
            return 0.1 * np.exp(-y * y)
        b0 = 0.1
    else:
        t2 = np.tanh(2.0)

        def u0(y):
            return 1.1 * (1.0 + np.tanh(4.0 * y + 2.0)) * (1.0 - np.tanh(4.0 * y - 2.0)) / (1.0 + t2) ** 2
        b0 = 1.1
    y = grid.centers
    h = np.ones(n)
    W = conserved_from_primitives(h, u0(y), 0.0, 0.0, b0, 0.0)
    bc = s1.Boundary1D(float(u0(np.float64(grid.y_lo))))
    return cfg, grid, topo, W, bc


def _example_2d(example, nx, ny, ov, perturb):
    grid = grid_2d(nx, ny, -10.0, 10.0)
    if example == 5:
        cfg = _cfg(ov, f_c=0.0, beta=0.1, topography=Gaussian(0.5, 0.0, 1.0, "y"))
        topo = topography_profile(cfg.topography, grid, s2.NG)
        W, bc = s2.quasi1d_steady_state_2d(cfg, grid, "y", E=6.0, tangential_velocity=0.25,
                                           tangential_field=3.0, topo=topo)
        ref = W.copy()
        if perturb:
            X, Y = grid.mesh()
            p = primitives_from_conserved(W)
            bump = np.where(np.hypot(X - 2.0, Y - 2.0) < 0.25, 0.05, 0.0)
            W = conserved_from_primitives(p["h"] + bump, p["u"], p["v"], p["a"], p["b"],
                                          p["A"], p["B"])
        return cfg, grid, topo, W, bc, ref

    X, Y = grid.mesh()
    R2 = X * X + Y * Y
    zeros_x, zeros_y = np.zeros(nx), np.zeros(ny)
    if example == 6:
        cfg = _cfg(ov, f_c=1.0, beta=0.0, topography=Flat())
        e = np.exp(-R2)
        common = 4.0 * X * Y * e
        W = conserved_from_primitives(np.ones_like(X), 0.0, 0.0, 2.0 * Y * e, -2.0 * X * e,
                                      -common, common)
        bc = s2.Boundary2D(zeros_x, zeros_y)
    elif example == 7:
        cfg = _cfg(ov, f_c=2.0, beta=0.0, topography=Gaussian(0.05, 0.0, 1.0, "r"))
        f = cfg.f_c

        def velocity(x, y):
            r = np.hypot(x, y)
            V = balanced_vortex_velocity(r, f, cfg.g, -0.1 * r * np.exp(-r * r))
            safe = np.where(r > 0, r, 1.0)
            return -V * y / safe, V * x / safe

        r = np.hypot(X, Y)
        u, v = velocity(X, Y)
        er = np.exp(-r)
        a, b = -1.1 * er * Y / r, 1.1 * er * X / r
        common = 1.1 * X * Y * (r + 1.0) * er / r**3
        W = conserved_from_primitives(np.ones_like(X), u, v, a, b, common, -common)
        u_south, _ = velocity(grid.x.centers, np.full(nx, grid.y.y_lo))
        _, v_west = velocity(np.full(ny, grid.x.y_lo), grid.y.centers)
        bc = s2.Boundary2D(u_south, v_west)
    elif example == 8:
        cfg = _cfg(ov, f_c=1.0, beta=0.0, topography=Flat())
        h = 1.0 + np.exp(-R2)
        W = conserved_from_primitives(h, 0.0, 0.0, 1.0 / h, 0.0, 0.0, 0.0)
        W[3] = 1.0  # ha is prescribed exactly
        bc = s2.Boundary2D(zeros_x, zeros_y)
    else:
        raise ValueError(f"unknown 2-D example {example}")
    topo = topography_profile(cfg.topography, grid, s2.NG)
    return cfg, grid, topo, W, bc, None


DEFAULT_MESH = {1: 100, 2: 100, 3: 4000, 4: 4000, 5: (100, 100), 6: (400, 400),
                7: (400, 400), 8: (200, 200)}
DEFAULT_T_END = {1: 5.0, 2: 5.0, 3: 5.0, 4: 5.0, 5: 1.0, 6: 8.0, 7: 8.0, 8: 8.0}


def build_problem(example: int, mesh=None, *, variant: str = "WB", t_end: float | None = None,
                  perturb: bool = False, snapshot_times=None, **overrides) -> Problem:
    """Construct one of the reference experiments.

    Args:
        example: 1..8.
        mesh: ``N`` (1-D) or ``(Nx, Ny)`` (2-D); defaults per example.
        variant: ``"WB"`` or ``"NWB"``.
        t_end: final time; defaults per example (1 for perturbed 1-D runs).
        perturb: add the localized depth bump (Examples 1, 2, 5).
        snapshot_times: times to record; Examples 6-8 default to 2, 4, 6, 8.
        **overrides: ``g``, ``f_c``, ``beta``, ``theta``, ``cfl``.
    """
    if example not in DEFAULT_MESH:
        raise ValueError(f"example must be 1..8, got {example}")
    ov = dict(overrides, variant=variant)
    mesh = DEFAULT_MESH[example] if mesh is None else mesh
    ref = None
    if example in (1, 2, 3, 4):
        n = int(mesh[0] if isinstance(mesh, (tuple, list)) else mesh)
        if example in (1, 2):
            cfg, grid, topo, W, bc, ref = _example_1d_steady(example, n, ov, perturb)
        else:
            cfg, grid, topo, W, bc = _example_1d_adjust(example, n, ov)
        dim = 1
    else:
        nx, ny = (mesh, mesh) if np.ndim(mesh) == 0 else mesh
        cfg, grid, topo, W, bc, ref = _example_2d(example, int(nx), int(ny), ov, perturb)
        dim = 2
    if t_end is None:
        t_end = 1.0 if (perturb and example in (1, 2, 5)) else DEFAULT_T_END[example]
    if snapshot_times is None:
        snapshot_times = (2.0, 4.0, 6.0, 8.0) if example in (6, 7, 8) else ()
    label = f"example{example}_{cfg.variant.lower()}" + ("_perturbed" if perturb else "")
    return Problem(example, dim, grid, cfg, topo, W, bc, float(t_end),
                   tuple(float(t) for t in snapshot_times), ref, label)


def with_config(problem: Problem, **changes) -> Problem:
    """Copy of ``problem`` with ModelConfig fields replaced."""
    return dataclasses.replace(problem, cfg=dataclasses.replace(problem.cfg, **changes))
