"""Two-dimensional well-balanced central-upwind scheme with a discretely
divergence-free magnetic field.

The state is a ``(7, Nx, Ny)`` array ``(h, hu, hv, ha, hb, A, B)`` where
``A`` and ``B`` track ``(ha)_x`` and ``(hb)_y``. Each direction is handled by
the shared kernels in ``_directional`` with the normal direction moved to
axis 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import _directional as kd
from .core import (IA_2D, IB_2D, IH, IHA, IHB, IHU, IHV, DegenerateEquilibrium, Grid2D,
                   ModelConfig, Topography2D, coriolis_at, primitives_from_conserved,
                   topography_profile)
from .cubic import solve_energy_cubic_array
from .reconstruct import divergence_sigma, minmod_slopes

NG = 2

X_FRAME_TO_STATE = (IH, IHU, IHV, IHA, IHB)
Y_FRAME_TO_STATE = (IH, IHV, IHU, IHB, IHA)


@dataclass(frozen=True)
class Boundary2D:
    """Boundary data held fixed in time.

    Attributes:
        u_south: ``u`` at ``(x_j, y_{1/2})`` for every column.
        v_west: ``v`` at ``(x_{1/2}, y_k)`` for every row.
    """

    u_south: np.ndarray
    v_west: np.ndarray


@dataclass
class EquilibriumField2D:
    # x-family (hu, Ex, v, ha, b)
    hu: np.ndarray
    Ex: np.ndarray
    v: np.ndarray
    ha: np.ndarray
    b: np.ndarray
    Px: np.ndarray
    Px_faces: np.ndarray
    # y-family (hv, u, Ey, a, hb)
    hv: np.ndarray
    u: np.ndarray
    Ey: np.ndarray
    a: np.ndarray
    hb: np.ndarray
    Py: np.ndarray
    Py_faces: np.ndarray


@dataclass
class Ghosted2D:
    """Padded state plus padded equilibrium families.

    ``W`` is ``(7, Nx+2g, Ny+2g)`` with filled corners. ``xfam`` holds the
    x-family on interior rows, ``(Nx+2g, Ny)``; ``yfam`` the y-family on all
    padded columns, ``(Nx+2g, Ny+2g)``.
    """

    W: np.ndarray
    xfam: dict
    yfam: dict


def _pressure_y(q: np.ndarray, q_half: np.ndarray, dy: float) -> np.ndarray:
    return kd.center_pressure(q.T, q_half, dy).T


def equilibrium_from_conserved_2d(W: np.ndarray, topo: Topography2D, cfg: ModelConfig,
                                  bc: Boundary2D) -> EquilibriumField2D:
    """Both equilibrium families and their pressure integrals."""
    p = primitives_from_conserved(W)
    grid = topo.grid
    g = cfg.g
    f_rows = coriolis_at(cfg, grid.y.centers)[None, :]
    Z = topo.centers

    qx = -f_rows * p["v"]
    Px = kd.center_pressure(qx, -f_rows[0] * bc.v_west, grid.dx)
    Px_faces = kd.face_pressure(qx, grid.dx)
    Ex = kd.energy(p["h"], W[IHU], W[IHA], Z, Px, g)

    qy = f_rows * p["u"]
    Py = _pressure_y(qy, float(coriolis_at(cfg, grid.y.y_lo)) * bc.u_south, grid.dy)
    Py_faces = kd.face_pressure(qy.T, grid.dy).T
    Ey = kd.energy(p["h"], W[IHV], W[IHB], Z, Py, g)
    return EquilibriumField2D(W[IHU], Ex, p["v"], W[IHA], p["b"], Px, Px_faces,
                              W[IHV], p["u"], Ey, p["a"], W[IHB], Py, Py_faces)


def _pad0(x, ng):
    return np.pad(x, [(ng, ng)] + [(0, 0)] * (x.ndim - 1), mode="edge")


def outflow_ghost_2d(W: np.ndarray, eq: EquilibriumField2D, topo: Topography2D,
                     cfg: ModelConfig, bc: Boundary2D) -> Ghosted2D:
    """Outflow ghosts by zero-order extrapolation of the directional family.

    Ghost columns copy ``(hu, Ex, v, ha, b)``, ghost rows copy
    ``(hv, u, Ey, a, hb)``; ``A`` and ``B`` are copied; the pressure integral
    is continued and ``h`` solved from the energy cubic. Rows are extended
    after columns so corner cells are filled.
    """
    grid = topo.grid
    ng, g = topo.ng, cfg.g
    nx, ny = grid.shape
    f_rows = coriolis_at(cfg, grid.y.centers)[None, :]

    # Columns.
    hu, Ex, v, ha, b = (_pad0(x, ng) for x in (eq.hu, eq.Ex, eq.v, eq.ha, eq.b))
    A, B = _pad0(W[IA_2D], ng), _pad0(W[IB_2D], ng)
    Px = kd.extend_pressure(eq.Px, -f_rows * v, grid.dx, ng)
    Zx = topo.padded[:, ng:ng + ny]
    h = _pad0(W[IH], ng)
    for sl in (slice(0, ng), slice(ng + nx, nx + 2 * ng)):
        h[sl] = solve_energy_cubic_array(0.5 * (hu[sl] ** 2 - ha[sl] ** 2),
                                         g * Zx[sl] + Px[sl], Ex[sl], g, h[sl])
    Wx = np.stack([h, hu, h * v, ha, h * b, A, B])
    Wx[:, ng:ng + nx] = W
    xfam = {"hu": hu, "E": Ex, "v": v, "ha": ha, "b": b, "P": Px}

    # Rows, over all padded columns.
    px = primitives_from_conserved(Wx)
    u_south = np.pad(bc.u_south, ng, mode="edge")
    qy = f_rows * px["u"]
    Py = _pressure_y(qy, float(coriolis_at(cfg, grid.y.y_lo)) * u_south, grid.dy)
    Ey = kd.energy(px["h"], Wx[IHV], Wx[IHB], Zx, Py, g)
    pad1 = lambda x: _pad0(x.T, ng).T  # noqa: E731
    hv, u, Ey, a, hb = (pad1(x) for x in (Wx[IHV], px["u"], Ey, px["a"], Wx[IHB]))
    A, B = pad1(Wx[IA_2D]), pad1(Wx[IB_2D])
    y_pad_q = coriolis_at(cfg, grid.y.padded_centers(ng))[None, :] * u
    Py = kd.extend_pressure(Py.T, y_pad_q.T, grid.dy, ng).T
    h = pad1(Wx[IH])
    Z = topo.padded
    for sl in (np.s_[:, 0:ng], np.s_[:, ng + ny:ny + 2 * ng]):
        h[sl] = solve_energy_cubic_array(0.5 * (hv[sl] ** 2 - hb[sl] ** 2),
                                         g * Z[sl] + Py[sl], Ey[sl], g, h[sl])
    Wp = np.stack([h, h * u, hv, h * a, hb, A, B])
    Wp[:, :, ng:ng + ny] = Wx
    yfam = {"hv": hv, "u": u, "E": Ey, "a": a, "hb": hb, "P": Py}
    return Ghosted2D(Wp, xfam, yfam)


def discrete_divergence(W: np.ndarray) -> np.ndarray:
    """Cellwise ``A + B``."""
    return W[IA_2D] + W[IB_2D]


def _corners_from_x_edges(q: np.ndarray, ng: int) -> np.ndarray:
    """Fill corner ghosts of ``q`` by copying along x from the ghost rows, in place.

    Fields differentiated along x take their corners from the y-ghost rows and
    vice versa, so the construction commutes with swapping the axes.
    """
    for corner, edge in ((slice(0, ng), ng), (slice(-ng, None), -ng - 1)):
        q[corner, :ng] = q[edge, :ng]
        q[corner, -ng:] = q[edge, -ng:]
    return q


def _sweep_states(gh: Ghosted2D, eq: EquilibriumField2D, topo: Topography2D,
                  cfg: ModelConfig):
    """Interface states for the x-sweep and (transposed) y-sweep."""
    grid = topo.grid
    ng, th = topo.ng, cfg.theta
    nx, ny = grid.shape
    Wp = gh.W
    inner = slice(ng, -ng)

    # Divergence-preserving slopes on cells 0..N+1 in both directions.
    ha_full = _corners_from_x_edges(Wp[IHA].copy(), ng)
    hb_full = _corners_from_x_edges(Wp[IHB].T.copy(), ng).T
    s_ha = minmod_slopes(ha_full, grid.dx, th)[:, 1:-1]
    s_hb = minmod_slopes(hb_full.T, grid.dy, th).T[1:-1, :]
    Ar, Br = Wp[IA_2D][1:-1, 1:-1], Wp[IB_2D][1:-1, 1:-1]
    sigma = divergence_sigma(s_ha, Ar, s_hb, Br)

    # Cross-derivative terms for the A/B fluxes.
    u_y = minmod_slopes(gh.yfam["u"].T, grid.dy, th).T[1:-1, 1:-1]
    v_full = Wp[IHV] / Wp[IH]
    v_full[:, inner] = gh.xfam["v"]
    _corners_from_x_edges(v_full, ng)
    v_x = minmod_slopes(v_full, grid.dx, th)[1:-1, 1:-1]

    xf = gh.xfam
    ix = kd.reconstruct_faces(
        h=Wp[IH][:, inner], Z=topo.padded[:, inner], m_n=xf["hu"], u_t=xf["v"], E=xf["E"],
        b_t=xf["b"], hbn=xf["ha"], m_t=Wp[IHV][:, inner], hbt=Wp[IHB][:, inner],
        mag_slope=(sigma * Ar)[:, 1:-1], P_faces=eq.Px_faces, d=grid.dx, g=cfg.g,
        theta=th, ng=ng, variant=cfg.variant)
    for name, idx in (("A", IA_2D), ("B", IB_2D)):
        r, l_, _ = kd._faces_minmod(Wp[idx][:, inner], grid.dx, th, ng, nx)
        ix.extras[name] = kd._split(r, l_)
    ix.extras["cross"] = kd._split(u_y, u_y)

    yf = {k: v[inner].T for k, v in gh.yfam.items()}
    T = lambda x: x[inner].T  # noqa: E731
    iy = kd.reconstruct_faces(
        h=T(Wp[IH]), Z=T(topo.padded), m_n=yf["hv"], u_t=yf["u"], E=yf["E"], b_t=yf["a"],
        hbn=yf["hb"], m_t=T(Wp[IHU]), hbt=T(Wp[IHA]), mag_slope=(sigma * Br)[1:-1, :].T,
        P_faces=eq.Py_faces.T, d=grid.dy, g=cfg.g, theta=th, ng=ng, variant=cfg.variant)
    for name, idx in (("A", IA_2D), ("B", IB_2D)):
        r, l_, _ = kd._faces_minmod(T(Wp[idx]), grid.dy, th, ng, ny)
        iy.extras[name] = kd._split(r, l_)
    iy.extras["cross"] = kd._split(v_x.T, v_x.T)
    return ix, iy


def _sweep_flux(iface: kd.InterfaceStates, g: float, frame_to_state, cross_sign: float):
    """Numerical flux ``(7, n+1, m)`` for one sweep (normal axis first)."""
    r_minus, r_plus = kd.flux_ledger(iface, g)
    s_plus, s_minus = kd.local_speeds(iface, g)
    mi, pl = iface.minus, iface.plus
    (a_mi, a_pl), (b_mi, b_pl) = iface.extras["A"], iface.extras["B"]
    c_mi, c_pl = iface.extras["cross"]
    F_mi, F_pl = kd.normal_flux(mi, g), kd.normal_flux(pl, g)

    def mag(s, A, B, cross):
        t = cross_sign * (s.hbt * cross)
        return [s.u_n * A - t, s.u_n * B + t]

    H_mi = [F_mi[c] - r_minus[c] for c in range(5)] + mag(mi, a_mi, b_mi, c_mi)
    H_pl = [F_pl[c] - r_plus[c] for c in range(5)] + mag(pl, a_pl, b_pl, c_pl)
    hat_mi = [mi.h_hat, mi.m_n, mi.m_t_hat, mi.hbn, mi.hbt_hat, a_mi, b_mi]
    hat_pl = [pl.h_hat, pl.m_n, pl.m_t_hat, pl.hbn, pl.hbt_hat, a_pl, b_pl]
    frame = kd.central_upwind(H_mi, H_pl, hat_mi, hat_pl, s_plus, s_minus)
    out = np.empty((7,) + s_plus.shape)
    for c, row in enumerate(frame_to_state):
        out[row] = frame[c]
    out[IA_2D], out[IB_2D] = frame[5], frame[6]
    return out, (s_plus, s_minus)


def rhs_and_speeds_2d(W: np.ndarray, topo: Topography2D, cfg: ModelConfig, bc: Boundary2D):
    """Semi-discrete right-hand side and the x/y speed pairs."""
    grid = topo.grid
    eq = equilibrium_from_conserved_2d(W, topo, cfg, bc)
    gh = outflow_ghost_2d(W, eq, topo, cfg, bc)
    ix, iy = _sweep_states(gh, eq, topo, cfg)
    # x: A-flux carries -hb*u_y, B-flux +hb*u_y; y: A-flux +ha*v_x, B-flux -ha*v_x.
    Hx, sx = _sweep_flux(ix, cfg.g, X_FRAME_TO_STATE, +1.0)
    HyT, syT = _sweep_flux(iy, cfg.g, Y_FRAME_TO_STATE, -1.0)
    Hy = np.transpose(HyT, (0, 2, 1))
    rhs = -(Hx[:, 1:, :] - Hx[:, :-1, :]) / grid.dx - (Hy[:, :, 1:] - Hy[:, :, :-1]) / grid.dy
    return rhs, (sx, syT)


def semidiscrete_rhs_2d(W: np.ndarray, topo: Topography2D, cfg: ModelConfig,
                        bc: Boundary2D) -> np.ndarray:
    """``dW/dt`` for every cell."""
    return rhs_and_speeds_2d(W, topo, cfg, bc)[0]


def _as_profile(val) -> Callable[[np.ndarray], np.ndarray]:
    if callable(val):
        return lambda s: np.asarray(val(s), dtype=np.float64)
    return lambda s: np.full(np.shape(s), float(val))


def quasi1d_steady_state_2d(cfg: ModelConfig, grid: Grid2D, family: str, *, E: float,
                            tangential_velocity=0.0, tangential_field=0.0,
                            topo: Topography2D | None = None):
    """Discrete quasi-1-D steady state.

    Args:
        family: ``"y"`` for states varying in y with ``v = b = 0`` and given
            ``u(y)``, ``a(y)``; ``"x"`` for states varying in x with
            ``u = a = 0`` and given ``v(x)``, ``b(x)``.
        E: constant of the energy along the varying direction.
        tangential_velocity: constant or profile of ``u`` (family y) or ``v``.
        tangential_field: constant or profile of ``a`` (family y) or ``b``.

    Returns:
        ``(W, Boundary2D)``.
    """
    if topo is None:
        topo = topography_profile(cfg.topography, grid, NG)
    vel, fld = _as_profile(tangential_velocity), _as_profile(tangential_field)
    X, Y = grid.mesh()
    Z = topo.centers
    f_rows = coriolis_at(cfg, grid.y.centers)[None, :]
    nx, ny = grid.shape
    if family == "y":
        if np.any(Z != Z[:1, :]):
            raise DegenerateEquilibrium("bottom must not depend on x for this family")
        u, a = vel(Y), fld(Y)
        u_south = vel(np.full(nx, grid.y.y_lo))
        P = _pressure_y(f_rows * u, float(coriolis_at(cfg, grid.y.y_lo)) * u_south, grid.dy)
        h = (E - P) / cfg.g - Z
        v = b = np.zeros_like(h)
        bc = Boundary2D(u_south, np.zeros(ny))
    elif family == "x":
        if np.any(Z != Z[:, :1]):
            raise DegenerateEquilibrium("bottom must not depend on y for this family")
        v, b = vel(X), fld(X)
        v_west = vel(np.full(ny, grid.x.y_lo))
        P = kd.center_pressure(-f_rows * v, -f_rows[0] * v_west, grid.dx)
        h = (E - P) / cfg.g - Z
        u = a = np.zeros_like(h)
        bc = Boundary2D(np.zeros(nx), v_west)
    else:
        raise ValueError("family must be 'x' or 'y'")
    if np.any(~(h > 0)):
        raise DegenerateEquilibrium("targets give a non-positive depth")
    zeros = np.zeros_like(h)
    W = np.stack([h, h * u, h * v, h * a, h * b, zeros, zeros])
    return W, bc
