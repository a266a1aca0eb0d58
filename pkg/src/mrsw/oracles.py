"""Slow independent reference computations used to cross-check fast kernels."""

from __future__ import annotations

import numpy as np

from .cubic import H_MAX

_SCAN = None


def _scan_grid(points: int = 10**6):
    global _SCAN
    if _SCAN is None or _SCAN[0].size != points + 1:
        h = np.geomspace(1e-12, H_MAX, points + 1)
        _SCAN = (h, h * h, np.empty_like(h))
    return _SCAN


def bisection_depth(c_kin: float, z_eff: float, e_target: float, g: float, h_guess: float,
                    points: int = 10**6):
    """Depth root by sign-change scan on a log grid plus bisection.

    Returns:
        ``(h, fell_back)`` with the same selection rule as the fast solver:
        closest positive root to ``h_guess``, ties to the larger root, and
        ``h_guess`` itself when no root exists in ``(0, H_MAX]``.
    """
    h, h2, phi = _scan_grid(points)
    a = z_eff - e_target
    np.multiply(h, g, out=phi)
    phi += a
    phi *= h2
    phi += c_kin
    neg = np.signbit(phi)
    idx = np.flatnonzero(neg[:-1] != neg[1:])
    if idx.size == 0:
        return float(h_guess), True
    lo, hi = h[idx].copy(), h[idx + 1].copy()
    f_lo = phi[idx].copy()
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = (g * mid + a) * mid * mid + c_kin
        same = np.signbit(f_mid) == np.signbit(f_lo)
        lo = np.where(same, mid, lo)
        f_lo = np.where(same, f_mid, f_lo)
        hi = np.where(same, hi, mid)
    roots = 0.5 * (lo + hi)
    dist = np.abs(roots - h_guess)
    return float(roots[dist == dist.min()].max()), False


def random_cubic_draws(n: int, seed: int = 0):
    """Coefficient draws ``(c_kin, z_eff, e_target, g, h_guess)`` covering all root regimes."""
    rng = np.random.default_rng(seed)
    return (rng.uniform(-5, 5, n), rng.uniform(-3, 3, n), rng.uniform(-3, 6, n),
            rng.uniform(0.5, 2, n), rng.uniform(0.05, 5, n))
