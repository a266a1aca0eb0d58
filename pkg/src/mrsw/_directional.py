"""Direction-agnostic kernels shared by the 1-D and 2-D solvers.

Everything here works along axis 0 in a normal/tangential frame:

* ``m_n``, ``m_t``: normal and tangential momentum,
* ``hbn``, ``hbt``: normal and tangential magnetic flux (``h`` times field),
* equilibrium family ``(m_n, u_t, E, b_t, hbn)``.

In 1-D (and the y-sweep in 2-D) the normal direction is y, so
``m_n = hv``, ``m_t = hu``, ``hbn = hb``, ``hbt = ha``. In the x-sweep
``m_n = hu``, ``m_t = hv``, ``hbn = ha``, ``hbt = hb``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields

import numpy as np

from .core import H_FLOOR, DepthTooSmall
from .cubic import solve_energy_cubic_array
from .reconstruct import minmod_slopes, weno_z_faces

# Frame component order used by fluxes and ledgers.
FRAME = ("h", "m_n", "m_t", "hbn", "hbt")


@dataclass
class FaceStates:
    """One-sided point values at every interface along the sweep."""

    h: np.ndarray
    m_n: np.ndarray
    m_t: np.ndarray
    hbn: np.ndarray
    hbt: np.ndarray
    u_n: np.ndarray
    u_t: np.ndarray
    b_n: np.ndarray
    b_t: np.ndarray
    E: np.ndarray
    Z: np.ndarray
    w: np.ndarray
    h_hat: np.ndarray | None = None
    m_t_hat: np.ndarray | None = None
    hbt_hat: np.ndarray | None = None

    def take(self, sl) -> "FaceStates":
        return FaceStates(**{f.name: (None if getattr(self, f.name) is None
                                      else getattr(self, f.name)[sl]) for f in fields(self)})


@dataclass
class InterfaceStates:
    """``minus`` is the left (or south/west) side, ``plus`` the right side."""

    minus: FaceStates
    plus: FaceStates
    P: np.ndarray
    extras: dict = field(default_factory=dict)


def center_pressure(q: np.ndarray, q_half, d: float) -> np.ndarray:
    """Trapezoidal running integral of ``q`` to cell centers.

    ``q_half`` is the integrand at the first interface. Summation is strictly
    left to right (``np.cumsum`` is sequential).
    """
    first = 0.25 * d * (q_half + q[0])
    incr = 0.5 * d * (q[:-1] + q[1:])
    return np.cumsum(np.concatenate([np.asarray(first)[None], incr]), axis=0)


def face_pressure(q: np.ndarray, d: float) -> np.ndarray:
    """Midpoint running integral to interfaces, zero at the first one."""
    zero = np.zeros((1,) + q.shape[1:])
    return np.concatenate([zero, np.cumsum(d * q, axis=0)], axis=0)


def extend_pressure(P: np.ndarray, q_pad: np.ndarray, d: float, ng: int) -> np.ndarray:
    """Continue the trapezoidal recursion into ``ng`` ghost cells per side."""
    n = P.shape[0]
    out = np.empty((n + 2 * ng,) + P.shape[1:])
    out[ng:ng + n] = P
    for c in range(ng - 1, -1, -1):
        out[c] = out[c + 1] - 0.5 * d * (q_pad[c] + q_pad[c + 1])
    for c in range(ng + n, n + 2 * ng):
        out[c] = out[c - 1] + 0.5 * d * (q_pad[c - 1] + q_pad[c])
    return out


def energy(h, m_n, hbn, Z, P, g):
    """Equilibrium energy ``(m_n^2 - hbn^2)/(2 h^2) + g (h + Z) + P``."""
    return (m_n * m_n - hbn * hbn) / (2.0 * h * h) + g * (h + Z) + P


def _faces_minmod(psi, d, theta, ng, n):
    s = minmod_slopes(psi[ng - 2:ng + n + 2], d, theta)
    c = psi[ng - 1:ng + n + 1]
    return c + 0.5 * d * s, c - 0.5 * d * s, s


def _faces_weno(psi, ng, n):
    return weno_z_faces(psi[ng - 3:ng + n + 3])


def _split(right, left):
    """Interface values from per-cell right/left face values."""
    return right[:-1], left[1:]


def reconstruct_faces(*, h, Z, m_n, u_t, E, b_t, hbn, m_t, hbt, mag_slope, P_faces,
                      d, g, theta, ng, variant="WB", weno=False) -> InterfaceStates:
    """Reconstruct both one-sided states at the ``n + 1`` interfaces.

    All per-cell inputs are padded along axis 0 with ``ng`` ghost cells
    (``ng >= 3`` when ``weno``). ``mag_slope`` is the slope used for the
    normal magnetic flux; it only needs the ``n + 2`` cells adjacent to
    interfaces, but a padded array is accepted too.
    """
    n = h.shape[0] - 2 * ng
    cells = slice(ng - 1, ng + n + 1)
    if mag_slope.shape[0] == h.shape[0]:
        mag_slope = mag_slope[cells]

    w = h + Z
    wR, wL, _ = _faces_minmod(w, d, theta, ng, n)
    zR, zL, _ = _faces_minmod(Z, d, theta, ng, n)
    mnR, mnL, _ = _faces_minmod(m_n, d, theta, ng, n)
    hbn_c = hbn[cells]
    hbnR = hbn_c + 0.5 * d * mag_slope
    hbnL = hbn_c - 0.5 * d * mag_slope

    sides = {}
    if variant == "WB":
        eR, eL, _ = _faces_minmod(E, d, theta, ng, n)
        if weno:
            utR, utL = _faces_weno(u_t, ng, n)
            btR, btL = _faces_weno(b_t, ng, n)
        else:
            utR, utL, _ = _faces_minmod(u_t, d, theta, ng, n)
            btR, btL, _ = _faces_minmod(b_t, d, theta, ng, n)
        for name, pair in (("w", (wR, wL)), ("Z", (zR, zL)), ("m_n", (mnR, mnL)),
                           ("hbn", (hbnR, hbnL)), ("E", (eR, eL)), ("u_t", (utR, utL)),
                           ("b_t", (btR, btL))):
            sides[name] = _split(*pair)
        Pf = (P_faces, P_faces)
        hs = []
        for i in range(2):
            mn, hb_, z = sides["m_n"][i], sides["hbn"][i], sides["Z"][i]
            guess = sides["w"][i] - z
            hs.append(solve_energy_cubic_array(0.5 * (mn * mn - hb_ * hb_), g * z + Pf[i],
                                               sides["E"][i], g, guess))
        sides["h"] = tuple(hs)
        _check_depth(hs)
        sides["m_t"] = tuple(hs[i] * sides["u_t"][i] for i in range(2))
        sides["hbt"] = tuple(hs[i] * sides["b_t"][i] for i in range(2))
    elif variant == "NWB":
        mtR, mtL, _ = _faces_minmod(m_t, d, theta, ng, n)
        hbtR, hbtL, _ = _faces_minmod(hbt, d, theta, ng, n)
        for name, pair in (("w", (wR, wL)), ("Z", (zR, zL)), ("m_n", (mnR, mnL)),
                           ("hbn", (hbnR, hbnL)), ("m_t", (mtR, mtL)), ("hbt", (hbtR, hbtL))):
            sides[name] = _split(*pair)
        hs = tuple(sides["w"][i] - sides["Z"][i] for i in range(2))
        _check_depth(hs)
        sides["h"] = hs
        sides["u_t"] = tuple(sides["m_t"][i] / hs[i] for i in range(2))
        sides["b_t"] = tuple(sides["hbt"][i] / hs[i] for i in range(2))
        sides["E"] = tuple(energy(hs[i], sides["m_n"][i], sides["hbn"][i], sides["Z"][i],
                                  P_faces, g) for i in range(2))
    else:
        raise ValueError(f"unknown variant {variant!r}")

    states = []
    for i in range(2):
        h_i = sides["h"][i]
        states.append(FaceStates(
            h=h_i, m_n=sides["m_n"][i], m_t=sides["m_t"][i], hbn=sides["hbn"][i],
            hbt=sides["hbt"][i], u_n=sides["m_n"][i] / h_i, u_t=sides["u_t"][i],
            b_n=sides["hbn"][i] / h_i, b_t=sides["b_t"][i], E=sides["E"][i],
            Z=sides["Z"][i], w=sides["w"][i]))
    iface = InterfaceStates(states[0], states[1], P_faces)
    hat_states(iface, g)
    return iface


def _check_depth(hs):
    for h in hs:
        if np.any(~(h > H_FLOOR)):
            raise DepthTooSmall(f"interface depth {np.nanmin(h):.3e} at or below floor")


def hat_states(iface: InterfaceStates, g: float) -> InterfaceStates:
    """Depths consistent with the interface-averaged bottom, in place.

    Where both sides share the same bottom value the one-sided depth is kept;
    elsewhere the energy cubic is re-solved with ``Z = (Z^- + Z^+)/2``.
    """
    zmid = 0.5 * (iface.minus.Z + iface.plus.Z)
    differ = np.nonzero(iface.minus.Z != iface.plus.Z)
    for s in (iface.minus, iface.plus):
        s.h_hat = s.h.copy()
        if differ[0].size:
            mn, hbn, zm = s.m_n[differ], s.hbn[differ], zmid[differ]
            s.h_hat[differ] = solve_energy_cubic_array(
                0.5 * (mn * mn - hbn * hbn), g * zm + iface.P[differ], s.E[differ], g,
                s.w[differ] - zm)
        s.m_t_hat = s.h_hat * s.u_t
        s.hbt_hat = s.h_hat * s.b_t
    return iface


def normal_flux(s: FaceStates, g: float):
    """Physical normal flux in frame order ``(h, m_n, m_t, hbn, hbt)``."""
    return (
        s.m_n,
        s.m_n * s.u_n + 0.5 * g * s.h * s.h - s.hbn * s.b_n,
        s.m_n * s.u_t - s.hbn * s.b_t,
        np.zeros_like(s.h),
        s.m_n * s.b_t - s.hbn * s.u_t,
    )


def path_product(left: FaceStates, right: FaceStates):
    """``0.5 * (M(left) + M(right)) @ (Eq(right) - Eq(left))`` in frame order."""
    d_mn = right.m_n - left.m_n
    d_ut = right.u_t - left.u_t
    d_E = right.E - left.E
    d_bt = right.b_t - left.b_t
    d_hbn = right.hbn - left.hbn
    u_n = 0.5 * (left.u_n + right.u_n)
    u_t = 0.5 * (left.u_t + right.u_t)
    b_t = 0.5 * (left.b_t + right.b_t)
    h = 0.5 * (left.h + right.h)
    m_n = 0.5 * (left.m_n + right.m_n)
    hbn = 0.5 * (left.hbn + right.hbn)
    return (
        d_mn,
        u_n * d_mn + h * d_E,
        u_t * d_mn + m_n * d_ut - hbn * d_bt,
        u_n * d_hbn,
        b_t * d_mn - hbn * d_ut + m_n * d_bt,
    )


def flux_ledger(iface: InterfaceStates, g: float, cell_source=None):
    """Recursive global integrals at both sides of every interface.

    Args:
        iface: interface states for ``n + 1`` interfaces.
        g: gravity.
        cell_source: optional per-cell additions to ``Q_k`` in frame order
            (entries may be ``None``).

    Returns:
        ``(R_minus, R_plus)``, lists of arrays in frame order. ``R_minus`` at
        the first interface is zero.
    """
    mi, pl = iface.minus, iface.plus
    inner_l = pl.take(slice(None, -1))   # left face of cells 1..n
    inner_r = mi.take(slice(1, None))    # right face of cells 1..n
    F_il, F_ir = normal_flux(inner_l, g), normal_flux(inner_r, g)
    F_mi, F_pl = normal_flux(mi, g), normal_flux(pl, g)
    path_cell = path_product(inner_l, inner_r)
    path_jump = path_product(mi, pl)

    r_minus, r_plus = [], []
    for c in range(5):
        q_cell = F_ir[c] - F_il[c] - path_cell[c]
        if cell_source is not None and cell_source[c] is not None:
            q_cell = q_cell + cell_source[c]
        q_jump = F_pl[c] - F_mi[c] - path_jump[c]
        n1 = q_jump.shape[0]
        seq = np.empty((2 * n1 - 1,) + q_jump.shape[1:])
        seq[0::2] = q_jump
        seq[1::2] = q_cell
        acc = np.cumsum(seq, axis=0)
        r_plus.append(acc[0::2])
        rm = np.empty_like(q_jump)
        rm[0] = 0.0
        rm[1:] = acc[1::2]
        r_minus.append(rm)
    return r_minus, r_plus


def local_speeds(iface: InterfaceStates, g: float):
    """One-sided speed bounds ``(s_plus, s_minus)`` including zero."""
    mi, pl = iface.minus, iface.plus
    cm = np.sqrt(mi.b_n * mi.b_n + g * mi.h)
    cp = np.sqrt(pl.b_n * pl.b_n + g * pl.h)
    s_plus = np.maximum(np.maximum(mi.u_n + cm, pl.u_n + cp), 0.0)
    s_minus = np.minimum(np.minimum(mi.u_n - cm, pl.u_n - cp), 0.0)
    return s_plus, s_minus


DEGENERATE_SPEED_GAP = 1e-14


def central_upwind(H_minus, H_plus, W_minus, W_plus, s_plus, s_minus):
    """Central-upwind combination; falls back to the average if speeds vanish."""
    gap = s_plus - s_minus
    degenerate = gap < DEGENERATE_SPEED_GAP
    safe = np.where(degenerate, 1.0, gap)
    out = []
    for hm, hp, wm, wp in zip(H_minus, H_plus, W_minus, W_plus):
        cu = (s_plus * hm - s_minus * hp) / safe + (s_plus * s_minus / safe) * (wp - wm)
        out.append(np.where(degenerate, 0.5 * (hm + hp), cu))
    return out
