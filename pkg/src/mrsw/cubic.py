"""Depth recovery from the energy equilibrium variable.

Given ``c_kin``, ``z_eff`` and a target ``E`` we look for ``h > 0`` with

    c_kin / h**2 + g*h + z_eff = E,

equivalently ``g h^3 + (z_eff - E) h^2 + c_kin = 0``. All real roots come
from the trigonometric/Cardano formulas followed by a Newton polish; the
positive root closest to a guess is returned (ties go to the larger root)
and the guess itself is returned when no positive root exists.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import MRSWError

H_MAX = 1e6
ROOT_RESIDUAL_TOL = 1e-8
_TWO_PI_3 = 2.0 * np.pi / 3.0


class NonFinite(MRSWError, ArithmeticError):
    """Non-finite coefficient passed to the cubic solver."""


@dataclass(frozen=True)
class EnergyCubic:
    c_kin: float
    z_eff: float
    e_target: float
    g: float
    h_guess: float


def _newton(h, a2, a0):
    """One guarded Newton step on ``h^3 + a2 h^2 + a0``."""
    phi = h * h * (h + a2) + a0
    dphi = h * (3.0 * h + 2.0 * a2)
    with np.errstate(divide="ignore", invalid="ignore"):
        hn = h - phi / dphi
    phin = hn * hn * (hn + a2) + a0
    better = np.isfinite(hn) & (np.abs(phin) <= np.abs(phi))
    return np.where(better, hn, h)


def cubic_real_roots(a2: np.ndarray, a0: np.ndarray):
    """Real roots of ``h^3 + a2 h^2 + a0`` as a ``(3, ...)`` array (NaN if absent)."""
    a2 = np.asarray(a2, dtype=np.float64)
    shape = np.broadcast_shapes(a2.shape, np.shape(a0))
    a2 = np.broadcast_to(a2, shape).ravel()
    a0 = np.broadcast_to(np.asarray(a0, dtype=np.float64), shape).ravel()
    shift = a2 / 3.0
    p = -a2 * a2 / 3.0
    q = 2.0 * a2 * a2 * a2 / 27.0 + a0
    # Factored form of q^2/4 + p^3/27; avoids cancellation when |a0| << |a2|^3.
    disc = a0 * (0.25 * a0 + a2 * a2 * a2 / 27.0)
    t = np.full((3, a2.size), np.nan)

    # Three real roots: trigonometric form (p < 0 here).
    three = np.flatnonzero(disc < 0.0)
    if three.size:
        pt, qt = p[three], q[three]
        m = 2.0 * np.sqrt(-pt / 3.0)
        arg = np.clip(1.5 * qt / pt * np.sqrt(-3.0 / pt), -1.0, 1.0)
        ang = np.arccos(arg) / 3.0
        roots = np.stack([m * np.cos(ang - i * _TWO_PI_3) for i in range(3)]) - shift[three]
        # Only the largest root is free of cancellation; deflate by it and
        # solve the remaining h^2 + b h + c in the stable quadratic form.
        r = roots[np.argmax(np.abs(roots), axis=0), np.arange(three.size)]
        c = -a0[three] / r
        b = c / r
        sq = -0.5 * (b + np.copysign(np.sqrt(np.maximum(b * b - 4.0 * c, 0.0)), b))
        with np.errstate(divide="ignore", invalid="ignore"):
            roots = np.stack([r, sq, c / sq])
        t[:, three] = roots + shift[three]

    # One real root: Cardano in its cancellation-free form.
    one = np.flatnonzero(disc >= 0.0)
    if one.size:
        po, qo = p[one], q[one]
        big = -np.where(qo >= 0.0, 1.0, -1.0) * np.cbrt(0.5 * np.abs(qo) + np.sqrt(disc[one]))
        with np.errstate(divide="ignore", invalid="ignore"):
            small = np.where(big != 0.0, -po / (3.0 * big), 0.0)
        t[0, one] = big + small
    return (t - shift).reshape((3,) + shape)


def solve_energy_cubic_array(c_kin, z_eff, e_target, g, h_guess, *,
                             return_fallback: bool = False):
    """Vectorised depth recovery; see module docstring.

    Args:
        c_kin: kinetic coefficient, e.g. ``((hv)^2 - (hb)^2) / 2``.
        z_eff: ``g*Z + P``.
        e_target: target energy.
        g: gravity.
        h_guess: anchor for root selection and fallback value.
        return_fallback: also return a mask of entries that used the fallback.
    """
    c_kin, z_eff, e_target, g, h_guess = np.broadcast_arrays(
        *(np.asarray(v, dtype=np.float64) for v in (c_kin, z_eff, e_target, g, h_guess)))
    for v in (c_kin, z_eff, e_target, g, h_guess):
        if not np.all(np.isfinite(v)):
            raise NonFinite("cubic coefficients must be finite")
    a2 = (z_eff - e_target) / g
    a0 = c_kin / g

    roots = _newton(cubic_real_roots(a2, a0), a2, a0)
    # Rounding can turn a complex pair into spurious real roots; keep only
    # candidates whose residual is small against the size of the terms.
    with np.errstate(invalid="ignore", over="ignore"):
        scale = np.abs(roots**3) + np.abs(a2 * roots * roots) + np.abs(a0)
        resid = np.abs(roots * roots * (roots + a2) + a0)
    valid = (np.isfinite(roots) & (roots > 0.0) & (roots <= H_MAX)
             & (resid <= ROOT_RESIDUAL_TOL * scale))
    dist = np.where(valid, np.abs(roots - h_guess), np.inf)
    best = dist.min(axis=0)
    pick = valid & (dist == best)
    chosen = np.where(pick, roots, -np.inf).max(axis=0)

    # Zero kinetic term: the nonzero root is exact.
    linear = a0 == 0.0
    chosen = np.where(linear, np.where(-a2 > 0.0, -a2, -np.inf), chosen)
    found = np.isfinite(chosen)
    h = np.where(found, chosen, h_guess)
    if return_fallback:
        return h, ~found
    return h


def solve_energy_cubic(c: EnergyCubic) -> float:
    """Scalar depth recovery."""
    return float(solve_energy_cubic_array(c.c_kin, c.z_eff, c.e_target, c.g, c.h_guess))


def energy_residual(h, c_kin, z_eff, e_target, g):
    """``c_kin/h^2 + g h + z_eff - E``."""
    return c_kin / (h * h) + g * h + z_eff - e_target
