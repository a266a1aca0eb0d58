import numpy as np
import pytest

from mrsw import solver2d as s2
from mrsw.core import (IA_2D, IB_2D, IH, IHA, IHB, IHU, IHV, DegenerateEquilibrium, Flat,
                       Gaussian, ModelConfig, conserved_from_primitives, grid_2d,
                       topography_profile)
from mrsw.presets import build_problem
from mrsw.timeint import integrate


def _ex5(variant="WB", n=40):
    cfg = ModelConfig(beta=0.1, topography=Gaussian(0.5, 0.0, 1.0, "y"), variant=variant)
    grid = grid_2d(n, n, -10.0, 10.0)
    topo = topography_profile(cfg.topography, grid, s2.NG)
    W, bc = s2.quasi1d_steady_state_2d(cfg, grid, "y", E=6.0, tangential_velocity=0.25,
                                       tangential_field=3.0, topo=topo)
    return cfg, grid, topo, W, bc


def _smooth_state(grid):
    X, Y = grid.mesh()
    h = 1.0 + 0.2 * np.exp(-((X - 0.3) ** 2 + (Y + 0.2) ** 2))
    u = 0.1 * np.sin(X + 2 * Y)
    v = 0.1 * np.cos(0.5 * X - Y)
    a = 0.3 + 0.05 * np.sin(Y)
    b = -0.2 + 0.05 * np.cos(X)
    A = 0.02 * np.cos(X + Y)
    return conserved_from_primitives(h, u, v, a, b, A, -A)


def _transpose_state(W):
    order = [IH, IHV, IHU, IHB, IHA, IB_2D, IA_2D]
    return np.stack([W[c].T for c in order])


# --- equilibrium variables ----------------------------------------------------


def test_zero_rotation_gives_zero_pressure():
    cfg = ModelConfig()
    grid = grid_2d(6, 7, 0.0, 1.0)
    topo = topography_profile(Flat(), grid, s2.NG)
    W = _smooth_state(grid)
    eq = s2.equilibrium_from_conserved_2d(W, topo, cfg, s2.Boundary2D(np.ones(6), np.ones(7)))
    assert np.all(eq.Px == 0.0) and np.all(eq.Py == 0.0)


def test_pressure_integrals_match_direct_sums():
    cfg = ModelConfig(f_c=0.7, beta=0.3)
    grid = grid_2d(5, 6, -1.0, 1.0)
    topo = topography_profile(Flat(), grid, s2.NG)
    W = _smooth_state(grid)
    bc = s2.Boundary2D(np.linspace(0.1, 0.5, 5), np.linspace(-0.2, 0.2, 6))
    eq = s2.equilibrium_from_conserved_2d(W, topo, cfg, bc)
    u, v = W[IHU] / W[IH], W[IHV] / W[IH]
    y = grid.y.centers
    f = 0.7 + 0.3 * y
    dx, dy = grid.dx, grid.dy
    for j in range(5):
        for k in range(6):
            px = 0.25 * dx * (-f[k] * bc.v_west[k] - f[k] * v[0, k])
            for i in range(1, j + 1):
                px = px + 0.5 * dx * (-f[k] * v[i - 1, k] - f[k] * v[i, k])
            assert eq.Px[j, k] == px
            py = 0.25 * dy * ((0.7 + 0.3 * grid.y.y_lo) * bc.u_south[j] + f[0] * u[j, 0])
            for i in range(1, k + 1):
                py = py + 0.5 * dy * (f[i - 1] * u[j, i - 1] + f[i] * u[j, i])
            assert eq.Py[j, k] == py


def test_example5_energy_is_constant():
    cfg, grid, topo, W, bc = _ex5()
    eq = s2.equilibrium_from_conserved_2d(W, topo, cfg, bc)
    np.testing.assert_allclose(eq.Ey, 6.0, rtol=0, atol=1e-13)
    np.testing.assert_allclose(eq.Ex, np.broadcast_to(eq.Ex[:1, :], eq.Ex.shape), rtol=0, atol=1e-13)


# --- steady states and right-hand side ------------------------------------------


def test_example5_rhs_vanishes_at_full_mesh():
    cfg, grid, topo, W, bc = _ex5(n=100)
    assert np.max(np.abs(s2.semidiscrete_rhs_2d(W, topo, cfg, bc))) < 1e-12


def test_x_family_rhs_vanishes():
    cfg = ModelConfig(f_c=0.5, topography=Gaussian(0.5, 0.0, 1.0, "x"))
    grid = grid_2d(30, 20, -5.0, 5.0)
    topo = topography_profile(cfg.topography, grid, s2.NG)
    W, bc = s2.quasi1d_steady_state_2d(cfg, grid, "x", E=4.0, tangential_velocity=0.2,
                                       tangential_field=-1.5, topo=topo)
    assert np.max(np.abs(s2.semidiscrete_rhs_2d(W, topo, cfg, bc))) < 1e-12


def test_nwb_breaks_example5_balance():
    cfg, grid, topo, W, bc = _ex5("NWB")
    assert np.max(np.abs(s2.semidiscrete_rhs_2d(W, topo, cfg, bc))) > 1e-6


def test_constant_state_rhs_is_zero():
    cfg = ModelConfig()
    grid = grid_2d(8, 9, 0.0, 1.0)
    topo = topography_profile(Flat(), grid, s2.NG)
    W = conserved_from_primitives(np.full((8, 9), 1.1), 0.2, -0.1, 0.3, 0.4, 0.0, 0.0)
    rhs = s2.semidiscrete_rhs_2d(W, topo, cfg, s2.Boundary2D(np.full(8, 0.2), np.full(9, -0.1)))
    assert np.max(np.abs(rhs)) < 1e-14


def test_lake_at_rest_steady_state():
    cfg = ModelConfig()
    grid = grid_2d(6, 6, 0.0, 1.0)
    W, _ = s2.quasi1d_steady_state_2d(cfg, grid, "y", E=2.0)
    assert np.all(W[IH] == 2.0) and np.all(W[1:] == 0.0)


def test_wrong_axis_bottom_rejected():
    cfg = ModelConfig(topography=Gaussian(0.5, 0.0, 1.0, "x"))
    with pytest.raises(DegenerateEquilibrium):
        s2.quasi1d_steady_state_2d(cfg, grid_2d(6, 6, -1.0, 1.0), "y", E=2.0)


def test_families_are_transposes():
    base = dict(f_c=0.8, beta=0.0)
    grid = grid_2d(12, 12, -3.0, 3.0)
    cy = ModelConfig(topography=Gaussian(0.3, 0.0, 1.0, "y"), **base)
    cx = ModelConfig(topography=Gaussian(0.3, 0.0, 1.0, "x"), f_c=-0.8)
    Wy, _ = s2.quasi1d_steady_state_2d(cy, grid, "y", E=3.0, tangential_velocity=0.4,
                                       tangential_field=1.0)
    Wx, _ = s2.quasi1d_steady_state_2d(cx, grid, "x", E=3.0, tangential_velocity=0.4,
                                       tangential_field=1.0)
    np.testing.assert_allclose(_transpose_state(Wy), Wx, rtol=0, atol=1e-14)


def test_transpose_symmetry_of_rhs():
    grid = grid_2d(16, 16, -2.0, 2.0)
    W = _smooth_state(grid)
    cfg = ModelConfig(f_c=0.6, topography=Flat())
    cfg_t = ModelConfig(f_c=-0.6, topography=Flat())
    topo = topography_profile(Flat(), grid, s2.NG)
    bc = s2.Boundary2D(np.linspace(0.0, 0.1, 16), np.linspace(0.05, -0.05, 16))
    bc_t = s2.Boundary2D(bc.v_west, bc.u_south)
    rhs = s2.semidiscrete_rhs_2d(W, topo, cfg, bc)
    rhs_t = s2.semidiscrete_rhs_2d(_transpose_state(W), topo, cfg_t, bc_t)
    np.testing.assert_allclose(rhs_t, _transpose_state(rhs), rtol=0, atol=1e-12)


def test_mass_rhs_telescopes():
    cfg, grid, topo, W, bc = _ex5(n=20)
    W = W.copy()
    W[IH, 8:11, 8:11] += 0.05
    eq = s2.equilibrium_from_conserved_2d(W, topo, cfg, bc)
    gh = s2.outflow_ghost_2d(W, eq, topo, cfg, bc)
    ix, iy = s2._sweep_states(gh, eq, topo, cfg)
    Hx, _ = s2._sweep_flux(ix, cfg.g, s2.X_FRAME_TO_STATE, +1.0)
    HyT, _ = s2._sweep_flux(iy, cfg.g, s2.Y_FRAME_TO_STATE, -1.0)
    boundary = (np.sum(Hx[IH, -1] - Hx[IH, 0]) * grid.dy + np.sum(HyT[IH, -1] - HyT[IH, 0]) * grid.dx)
    rhs = s2.semidiscrete_rhs_2d(W, topo, cfg, bc)
    assert np.sum(rhs[IH]) * grid.cell_volume == pytest.approx(-boundary, abs=1e-12)


# --- divergence and ghosts -----------------------------------------------------------


def test_example6_initial_divergence_is_exactly_zero():
    p = build_problem(6, (40, 40))
    assert np.max(np.abs(s2.discrete_divergence(p.W0))) == 0.0


def test_zero_field_divergence():
    assert np.all(s2.discrete_divergence(np.zeros((7, 5, 5))) == 0.0)


def test_divergence_stays_zero_for_100_steps():
    p = build_problem(6, (30, 30))
    worst = [0.0]
    w = p.W0
    from mrsw.timeint import ssp_rk3_step
    for _ in range(100):
        l0, dt = p.rhs_and_dt(w)
        w = ssp_rk3_step(w, lambda x: p.rhs_and_dt(x)[0], dt, l0)
        worst[0] = max(worst[0], float(np.max(np.abs(s2.discrete_divergence(w)))))
    assert worst[0] <= 1e-13


def test_example8_ghosts_are_positive():
    p = build_problem(8, (20, 20))
    eq = s2.equilibrium_from_conserved_2d(p.W0, p.topo, p.cfg, p.bc)
    gh = s2.outflow_ghost_2d(p.W0, eq, p.topo, p.cfg, p.bc)
    assert np.all(np.isfinite(gh.W)) and np.all(gh.W[IH] > 0)


def test_constant_state_ghosts_copy_edges():
    cfg = ModelConfig()
    grid = grid_2d(6, 6, 0.0, 1.0)
    topo = topography_profile(Flat(), grid, s2.NG)
    W = conserved_from_primitives(np.full((6, 6), 1.2), 0.1, 0.2, 0.3, 0.4, 0.0, 0.0)
    bc = s2.Boundary2D(np.full(6, 0.1), np.full(6, 0.2))
    eq = s2.equilibrium_from_conserved_2d(W, topo, cfg, bc)
    gh = s2.outflow_ghost_2d(W, eq, topo, cfg, bc)
    for c in range(7):
        np.testing.assert_allclose(gh.W[c], W[c, 0, 0], rtol=1e-14, atol=1e-15)


def test_reruns_are_bitwise_identical():
    outs = []
    for _ in range(2):
        p = build_problem(7, (24, 24), t_end=0.3)
        outs.append(integrate(p.W0, p.rhs_and_dt, 0.3).w.tobytes())
    assert outs[0] == outs[1]
