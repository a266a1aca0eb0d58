"""Well-balanced path-conservative central-upwind scheme in one dimension.

The state is a ``(6, N)`` array ``(h, hu, hv, ha, hb, B)`` where ``B``
tracks ``(hb)_y``. Coriolis forcing and topography enter through a global
running integral ``R`` so that the numerical flux is constant across a
discrete steady state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _directional as kd
from .core import (IB_1D, IH, IHA, IHB, IHU, IHV, DegenerateEquilibrium, Grid1D,
                   ModelConfig, Topography1D, coriolis_at, primitives_from_conserved,
                   topography_profile)
from .cubic import solve_energy_cubic_array

NG = 3  # ghost layers; WENO-Z needs three to reach the first ghost face

# Frame component -> state row (normal direction is y).
FRAME_TO_STATE = (IH, IHV, IHU, IHB, IHA)


@dataclass(frozen=True)
class Boundary1D:
    """Boundary data held fixed in time.

    Attributes:
        u_half: ``u`` at the first interface, used to start the pressure
            integral at cell centers.
    """

    u_half: float = 0.0


@dataclass
class EquilibriumField1D:
    hv: np.ndarray
    u: np.ndarray
    E: np.ndarray
    a: np.ndarray
    hb: np.ndarray
    P: np.ndarray
    P_faces: np.ndarray
    f: np.ndarray


@dataclass
class Ghosted1D:
    """State and equilibrium variables padded with ``NG`` ghost cells per side."""

    W: np.ndarray
    hv: np.ndarray
    u: np.ndarray
    E: np.ndarray
    a: np.ndarray
    hb: np.ndarray
    P: np.ndarray


@dataclass(frozen=True)
class SteadyTargets1D:
    """Constants of a 1-D steady state.

    ``u`` and ``a`` follow ``u_c + C*(f_c y + beta y^2/2)`` and
    ``a_c + D*(f_c y + beta y^2/2)`` with ``C = hv^2/(hv^2 - hb^2)`` and
    ``D = hv*hb/(hv^2 - hb^2)``.
    """

    hv: float
    E: float
    hb: float
    u_c: float
    a_c: float


def _coriolis_primitive(cfg: ModelConfig, y):
    """Antiderivative ``f_c y + beta y^2 / 2`` of the Coriolis parameter."""
    y = np.asarray(y, dtype=np.float64)
    return cfg.f_c * y + 0.5 * cfg.beta * y * y


def steady_profile_coefficients(hv, hb, *, strict: bool = False):
    """Coefficients ``(C, D)`` of the steady ``u`` and ``a`` profiles.

    Near-degenerate cases (``hv^2 == hb^2``) return zeros unless ``strict``,
    in which case a nonzero degenerate pair raises ``DegenerateEquilibrium``.
    """
    hv = np.asarray(hv, dtype=np.float64)
    hb = np.asarray(hb, dtype=np.float64)
    denom = hv * hv - hb * hb
    scale = hv * hv + hb * hb
    ok = np.abs(denom) > 1e-10 * scale
    if strict and np.any(~ok & (scale > 0)):
        raise DegenerateEquilibrium("hv = +-hb != 0 makes the steady profile singular")
    safe = np.where(ok, denom, 1.0)
    return np.where(ok, hv * hv / safe, 0.0), np.where(ok, hv * hb / safe, 0.0)


def equilibrium_from_conserved(W: np.ndarray, topo: Topography1D, cfg: ModelConfig,
                               bc: Boundary1D) -> EquilibriumField1D:
    """Equilibrium variables ``(hv, u, E, a, hb)`` and pressure integrals."""
    p = primitives_from_conserved(W)
    grid = topo.grid
    f = coriolis_at(cfg, grid.centers)
    q = f * p["u"]
    q_half = float(coriolis_at(cfg, grid.y_lo)) * bc.u_half
    P = kd.center_pressure(q, q_half, grid.dy)
    P_faces = kd.face_pressure(q, grid.dy)
    E = kd.energy(p["h"], W[IHV], W[IHB], topo.centers, P, cfg.g)
    return EquilibriumField1D(W[IHV].copy(), p["u"], E, p["a"], W[IHB].copy(), P, P_faces, f)


def outflow_ghost_1d(W: np.ndarray, eq: EquilibriumField1D, topo: Topography1D,
                     cfg: ModelConfig) -> Ghosted1D:
    """Outflow ghost cells by extrapolating the steady-state structure.

    ``hv``, ``E``, ``hb`` and ``B`` are copied from the nearest interior cell;
    ``u`` and ``a`` continue the steady profiles through that cell; the
    pressure integral continues its trapezoidal recursion and ``h`` solves the
    energy cubic.
    """
    grid = topo.grid
    n, ng = grid.n, topo.ng
    yp = grid.padded_centers(ng)
    pad = lambda x: np.pad(x, ng, mode="edge")  # noqa: E731
    hv, hb, E, B = pad(eq.hv), pad(eq.hb), pad(eq.E), pad(W[IB_1D])
    u, a = pad(eq.u), pad(eq.a)
    C, D = steady_profile_coefficients(hv, hb)
    Fp = _coriolis_primitive(cfg, yp)
    for sl, edge in ((slice(0, ng), ng), (slice(ng + n, n + 2 * ng), ng + n - 1)):
        dF = Fp[sl] - Fp[edge]
        u[sl] = u[edge] + C[sl] * dF
        a[sl] = a[edge] + D[sl] * dF
    P = kd.extend_pressure(eq.P, coriolis_at(cfg, yp) * u, grid.dy, ng)

    h = pad(W[IH])
    for sl in (slice(0, ng), slice(ng + n, n + 2 * ng)):
        h[sl] = solve_energy_cubic_array(0.5 * (hv[sl] ** 2 - hb[sl] ** 2),
                                         cfg.g * topo.padded[sl] + P[sl], E[sl], cfg.g, h[sl])
    Wp = np.stack([h, h * u, hv, h * a, hb, B])
    Wp[:, ng:ng + n] = W
    return Ghosted1D(Wp, hv, u, E, a, hb, P)


def wb_interface_reconstruction(gh: Ghosted1D, eq: EquilibriumField1D,
                                topo: Topography1D, cfg: ModelConfig) -> kd.InterfaceStates:
    """One-sided interface states, including hat depths.

    Frame names map to 1-D variables as ``m_n = hv``, ``m_t = hu``,
    ``hbn = hb``, ``hbt = ha``, ``u_t = u``, ``b_t = a``. ``B`` is carried
    in ``extras["B"]``.
    """
    ng, dy = topo.ng, topo.grid.dy
    Wp = gh.W
    weno = cfg.beta != 0.0 and cfg.variant == "WB"
    iface = kd.reconstruct_faces(
        h=Wp[IH], Z=topo.padded, m_n=gh.hv, u_t=gh.u, E=gh.E, b_t=gh.a, hbn=gh.hb,
        m_t=Wp[IHU], hbt=Wp[IHA], mag_slope=Wp[IB_1D], P_faces=eq.P_faces,
        d=dy, g=cfg.g, theta=cfg.theta, ng=ng, variant=cfg.variant, weno=weno)
    bR, bL, _ = kd._faces_minmod(Wp[IB_1D], dy, cfg.theta, ng, topo.grid.n)
    iface.extras["B"] = kd._split(bR, bL)
    return iface


hat_states = kd.hat_states


def global_flux_ledger(iface: kd.InterfaceStates, eq: EquilibriumField1D, W: np.ndarray,
                       cfg: ModelConfig, grid: Grid1D):
    """Running integrals ``R^-`` and ``R^+`` (frame order) at every interface."""
    source = [None, None, grid.dy * eq.f * W[IHV], None, None]
    return kd.flux_ledger(iface, cfg.g, cell_source=source)


def local_speeds_1d(iface: kd.InterfaceStates, g: float):
    """``(s_plus, s_minus)`` from ``v +- sqrt(b^2 + g h)`` on both sides."""
    return kd.local_speeds(iface, g)


def cu_flux_1d(iface: kd.InterfaceStates, ledger, speeds, g: float) -> np.ndarray:
    """Numerical flux ``(6, N+1)`` in state order."""
    r_minus, r_plus = ledger
    s_plus, s_minus = speeds
    mi, pl = iface.minus, iface.plus
    b_mi, b_pl = iface.extras["B"]
    F_mi, F_pl = kd.normal_flux(mi, g), kd.normal_flux(pl, g)
    H_mi = [F_mi[c] - r_minus[c] for c in range(5)] + [mi.u_n * b_mi]
    H_pl = [F_pl[c] - r_plus[c] for c in range(5)] + [pl.u_n * b_pl]
    hat_mi = [mi.h_hat, mi.m_n, mi.m_t_hat, mi.hbn, mi.hbt_hat, b_mi]
    hat_pl = [pl.h_hat, pl.m_n, pl.m_t_hat, pl.hbn, pl.hbt_hat, b_pl]
    frame = kd.central_upwind(H_mi, H_pl, hat_mi, hat_pl, s_plus, s_minus)
    out = np.empty((6, s_plus.shape[0]))
    for c, row in enumerate(FRAME_TO_STATE):
        out[row] = frame[c]
    out[IB_1D] = frame[5]
    return out


def rhs_and_speeds_1d(W: np.ndarray, topo: Topography1D, cfg: ModelConfig, bc: Boundary1D):
    """Semi-discrete right-hand side together with the local speeds."""
    eq = equilibrium_from_conserved(W, topo, cfg, bc)
    gh = outflow_ghost_1d(W, eq, topo, cfg)
    iface = wb_interface_reconstruction(gh, eq, topo, cfg)
    ledger = global_flux_ledger(iface, eq, W, cfg, topo.grid)
    speeds = local_speeds_1d(iface, cfg.g)
    H = cu_flux_1d(iface, ledger, speeds, cfg.g)
    return -(H[:, 1:] - H[:, :-1]) / topo.grid.dy, speeds


def semidiscrete_rhs_1d(W: np.ndarray, topo: Topography1D, cfg: ModelConfig,
                        bc: Boundary1D) -> np.ndarray:
    """``dW/dt`` for every cell."""
    return rhs_and_speeds_1d(W, topo, cfg, bc)[0]


def steady_state_discrete(cfg: ModelConfig, grid: Grid1D, targets: SteadyTargets1D,
                          topo: Topography1D | None = None):
    """Discrete steady state for constant ``hv``, ``E`` and ``hb``.

    Returns:
        ``(W, Boundary1D)`` with ``u``, ``a`` sampled at cell centers and
        ``h`` solved from the energy cubic with the trapezoidal pressure.
    """
    if topo is None:
        topo = topography_profile(cfg.topography, grid, NG)
    C, D = steady_profile_coefficients(targets.hv, targets.hb, strict=True)
    y = grid.centers
    Fp = _coriolis_primitive(cfg, y)
    u = targets.u_c + C * Fp
    a = targets.a_c + D * Fp
    u_half = float(targets.u_c + C * _coriolis_primitive(cfg, grid.y_lo))
    q = coriolis_at(cfg, y) * u
    P = kd.center_pressure(q, float(coriolis_at(cfg, grid.y_lo)) * u_half, grid.dy)
    z_eff = cfg.g * topo.centers + P
    guess = np.maximum((targets.E - z_eff) / cfg.g, 1e-3)
    h, fell_back = solve_energy_cubic_array(0.5 * (targets.hv**2 - targets.hb**2), z_eff,
                                            targets.E, cfg.g, guess, return_fallback=True)
    if np.any(fell_back):
        raise DegenerateEquilibrium("energy cubic has no positive root for the targets")
    W = np.stack([h, h * u, np.full_like(h, targets.hv), h * a,
                  np.full_like(h, targets.hb), np.zeros_like(h)])
    return W, Boundary1D(u_half)
