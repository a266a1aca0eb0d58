"""Piecewise-linear minmod reconstruction, WENO-Z interpolation and the
divergence-preserving magnetic face values.

Vectorised helpers operate along axis 0 so the same code serves 1-D arrays
and 2-D arrays whose normal direction has been moved to the front. Ghost
values must already be present in the input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MRSWError


class EmptyInput(MRSWError, ValueError):
    """minmod called without arguments."""


class TooShort(MRSWError, ValueError):
    """Array too short for the requested stencil."""


@dataclass(frozen=True)
class WenoZConfig:
    d0: float = 1.0 / 16.0
    d1: float = 5.0 / 8.0
    d2: float = 5.0 / 16.0
    eps: float = 1e-12
    r: int = 2


WENO_DEFAULT = WenoZConfig()


def minmod(values) -> float:
    """Scalar minmod: smallest magnitude if all arguments share a sign, else 0."""
    vals = [float(v) for v in values]
    if not vals:
        raise EmptyInput("minmod needs at least one value")
    if all(v > 0 for v in vals):
        return min(vals)
    if all(v < 0 for v in vals):
        return max(vals)
    return 0.0


def minmod3(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    """Elementwise three-argument minmod; odd in its arguments bit for bit."""
    pos = (a > 0) & (b > 0) & (c > 0)
    neg = (a < 0) & (b < 0) & (c < 0)
    lo = np.minimum(np.minimum(a, b), c)
    hi = np.maximum(np.maximum(a, b), c)
    return np.where(pos, lo, np.where(neg, hi, 0.0))


def minmod_slopes(psi: np.ndarray, d: float, theta: float) -> np.ndarray:
    """Generalized minmod slopes along axis 0 for cells ``1 .. n-2``.

    Args:
        psi: values with at least one neighbour on each side, shape ``(n, ...)``.
        d: cell width.
        theta: limiter parameter in [1, 2].

    Returns:
        Array of shape ``(n - 2, ...)``.
    """
    psi = np.asarray(psi, dtype=np.float64)
    if psi.shape[0] < 3:
        raise TooShort("minmod slopes need at least 3 values")
    back = psi[1:-1] - psi[:-2]
    fwd = psi[2:] - psi[1:-1]
    central = (psi[2:] - psi[:-2]) / (2.0 * d)
    return minmod3(theta * back / d, central, theta * fwd / d)


def linear_reconstruct(psi: np.ndarray, d: float, theta: float):
    """Slopes and one-sided interface values of the limited linear reconstruction.

    Returns:
        ``(slopes, minus, plus)`` where ``slopes[i]`` belongs to cell ``i+1``,
        and ``minus[i]``/``plus[i]`` are the left/right values at the interface
        between cells ``i+1`` and ``i+2`` (``n - 3`` interfaces).
    """
    slopes = minmod_slopes(psi, d, theta)
    psi = np.asarray(psi, dtype=np.float64)
    right_face = psi[1:-1] + 0.5 * d * slopes
    left_face = psi[1:-1] - 0.5 * d * slopes
    return slopes, right_face[:-1], left_face[1:]


def _weno_z(p0, p1, p2, p3, p4, cfg: WenoZConfig):
    """Value at the right face of the centre point of ``p0..p4``."""
    q0 = 0.375 * p0 - 1.25 * p1 + 1.875 * p2
    q1 = -0.125 * p1 + 0.75 * p2 + 0.375 * p3
    q2 = 0.375 * p2 + 0.75 * p3 - 0.125 * p4
    b0 = 13.0 / 12.0 * (p0 - 2.0 * p1 + p2) ** 2 + 0.25 * (p0 - 4.0 * p1 + 3.0 * p2) ** 2
    b1 = 13.0 / 12.0 * (p1 - 2.0 * p2 + p3) ** 2 + 0.25 * (p1 - p3) ** 2
    b2 = 13.0 / 12.0 * (p2 - 2.0 * p3 + p4) ** 2 + 0.25 * (3.0 * p2 - 4.0 * p3 + p4) ** 2
    tau = np.abs(b2 - b0)
    a0 = cfg.d0 * (1.0 + (tau / (b0 + cfg.eps)) ** cfg.r)
    a1 = cfg.d1 * (1.0 + (tau / (b1 + cfg.eps)) ** cfg.r)
    a2 = cfg.d2 * (1.0 + (tau / (b2 + cfg.eps)) ** cfg.r)
    return (a0 * q0 + a1 * q1 + a2 * q2) / (a0 + a1 + a2)


def weno_z_value(stencil, cfg: WenoZConfig = WENO_DEFAULT) -> float:
    """Left-sided value at ``y_{k+1/2}`` from ``psi_{k-2} .. psi_{k+2}``.

    The right-sided value at ``y_{k-1/2}`` is ``weno_z_value(stencil[::-1])``.
    """
    p = [float(v) for v in stencil]
    if len(p) != 5:
        raise TooShort("WENO-Z needs exactly 5 values")
    return float(_weno_z(*p, cfg))


def weno_z_faces(psi: np.ndarray, cfg: WenoZConfig = WENO_DEFAULT):
    """Right-face and left-face values for cells ``2 .. n-3`` along axis 0.

    Returns:
        ``(right_face, left_face)``, each of shape ``(n - 4, ...)``.
    """
    psi = np.asarray(psi, dtype=np.float64)
    n = psi.shape[0]
    if n < 5:
        raise TooShort("WENO-Z needs at least 5 values")
    s = [psi[i:n - 4 + i] for i in range(5)]
    right = _weno_z(s[0], s[1], s[2], s[3], s[4], cfg)
    left = _weno_z(s[4], s[3], s[2], s[1], s[0], cfg)
    return right, left


def divergence_sigma(slope_ha_x: np.ndarray, a_bar: np.ndarray,
                     slope_hb_y: np.ndarray, b_bar: np.ndarray) -> np.ndarray:
    """Scaling factor ``min(1, sigma_x, sigma_y)`` limiting the magnetic slopes."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        sx = np.where(slope_ha_x * a_bar > 0, np.minimum(1.0, slope_ha_x / a_bar), 0.0)
        sy = np.where(slope_hb_y * b_bar > 0, np.minimum(1.0, slope_hb_y / b_bar), 0.0)
    return np.minimum(1.0, np.minimum(sx, sy))


def magnetic_interface_2d(ha_bar, hb_bar, a_bar, b_bar, slope_ha_x, slope_hb_y,
                          dx: float, dy: float):
    """Face values of ``ha`` (east/west) and ``hb`` (north/south).

    The slopes of ``ha`` in x and ``hb`` in y are replaced by ``sigma * A`` and
    ``sigma * B`` so their sum vanishes whenever ``A + B`` does.

    Returns:
        ``(ha_east, ha_west, hb_north, hb_south, sigma)``.
    """
    sigma = divergence_sigma(slope_ha_x, a_bar, slope_hb_y, b_bar)
    ha_step = 0.5 * dx * (sigma * a_bar)
    hb_step = 0.5 * dy * (sigma * b_bar)
    return ha_bar + ha_step, ha_bar - ha_step, hb_bar + hb_step, hb_bar - hb_step, sigma
