"""Energy, balance residuals, derived 2-D fields, error norms and convergence rates."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import IH, IHA, IHB, IHU, IHV, MRSWError, ModelConfig, coriolis_at


class WindowNotStarted(MRSWError, ValueError):
    """Time average requested before the averaging window opened."""


class ShapeMismatch(MRSWError, ValueError):
    """Field and reference have different shapes."""


class NonPositive(MRSWError, ValueError):
    """Convergence rate requested from a non-positive error."""


def total_energy(W: np.ndarray, Z, g: float, volume: float) -> float:
    """``sum(h|u|^2/2 + h|b|^2/2 + g h (h/2 + Z)) * volume`` over all cells."""
    h = W[IH]
    kinetic = (W[IHU] ** 2 + W[IHV] ** 2 + W[IHA] ** 2 + W[IHB] ** 2) / (2.0 * h)
    return float(np.sum(kinetic + g * h * (0.5 * h + Z)) * volume)


def _central_diff(q: np.ndarray, d: float) -> np.ndarray:
    return np.gradient(q, d, axis=0)


def balance_residual_instant(W: np.ndarray, Z, cfg: ModelConfig, y: np.ndarray, dy: float):
    """Pressure-Lorentz term ``g (h+Z)_y - b b_y`` and Coriolis term ``-f u``.

    The first field equals ``g h_y - b b_y`` on flat bottoms.
    """
    h = W[IH]
    b = W[IHB] / h
    pressure = cfg.g * _central_diff(h + Z, dy) - b * _central_diff(b, dy)
    coriolis = -coriolis_at(cfg, y) * W[IHU] / h
    return pressure, coriolis


@dataclass
class BalanceAccumulator:
    """Trapezoidal time integrals of both balance fields from ``t = 2 T_f``.

    Attributes:
        t_start: window start ``2 T_f = 4 pi / f``.
    """

    t_start: float
    pressure: np.ndarray | None = None
    coriolis: np.ndarray | None = None
    samples: int = 0
    _last: tuple | None = field(default=None, repr=False)

    @classmethod
    def for_coriolis(cls, f: float) -> "BalanceAccumulator":
        return cls(4.0 * np.pi / f)

    def add(self, t: float, pressure: np.ndarray, coriolis: np.ndarray) -> None:
        """Record one accepted step; the step straddling ``t_start`` is clipped to it."""
        prev, self._last = self._last, (t, pressure.copy(), coriolis.copy())
        if t < self.t_start or prev is None:
            return
        t0, p0, c0 = prev
        if t0 < self.t_start:
            # Linear interpolation to the window start.
            s = (self.t_start - t0) / (t - t0)
            t0, p0, c0 = self.t_start, p0 + s * (pressure - p0), c0 + s * (coriolis - c0)
        w = 0.5 * (t - t0)
        if self.pressure is None:
            self.pressure = np.zeros_like(pressure)
            self.coriolis = np.zeros_like(coriolis)
        self.pressure = self.pressure + w * (p0 + pressure)
        self.coriolis = self.coriolis + w * (c0 + coriolis)
        self.samples += 1


def balance_residual_timeavg(acc: BalanceAccumulator, T: float):
    """Both accumulated integrals divided by ``T - 2 T_f``."""
    if T <= acc.t_start or acc.pressure is None:
        raise WindowNotStarted(f"averaging window starts at t={acc.t_start}")
    span = T - acc.t_start
    return acc.pressure / span, acc.coriolis / span


def vorticity_and_divergence(W: np.ndarray, dx: float, dy: float):
    """``(v_x - u_y, u_x + v_y)`` by central differences (arrays indexed ``[i_x, i_y]``)."""
    h = W[IH]
    u, v = W[IHU] / h, W[IHV] / h
    u_x, u_y = np.gradient(u, dx, dy)
    v_x, v_y = np.gradient(v, dx, dy)
    return v_x - u_y, u_x + v_y


def error_norms(field_, reference, delta: float):
    """``(L_inf, L1)`` of ``field_ - reference``; ``delta`` is the cell size or volume."""
    a, b = np.asarray(field_), np.asarray(reference)
    if a.shape != b.shape:
        raise ShapeMismatch(f"{a.shape} vs {b.shape}")
    diff = np.abs(a - b)
    if diff.size == 0:
        return 0.0, 0.0
    return float(diff.max()), float(diff.sum() * delta)


def runge_rate(e_coarse: float, e_fine: float) -> float:
    """``log2(e_coarse / e_fine)`` for two successive-mesh differences."""
    if not (e_coarse > 0 and e_fine > 0):
        raise NonPositive("Runge rate needs positive differences")
    return float(np.log2(e_coarse / e_fine))


def block_average(q: np.ndarray, factor: int = 2) -> np.ndarray:
    """Average consecutive blocks of ``factor`` cells along every axis."""
    out = np.asarray(q, dtype=np.float64)
    for ax in range(out.ndim):
        n = out.shape[ax]
        if n % factor:
            raise ShapeMismatch(f"axis {ax} length {n} not divisible by {factor}")
        shape = out.shape[:ax] + (n // factor, factor) + out.shape[ax + 1:]
        out = out.reshape(shape).mean(axis=ax + 1)
    return out


def successive_differences(solutions, cell_sizes):
    """L1 norms ``||q_N - avg(q_2N)||`` for consecutive pairs of a doubling chain."""
    out = []
    for coarse, fine, d in zip(solutions[:-1], solutions[1:], cell_sizes[:-1]):
        vol = float(np.prod(d)) if np.ndim(d) else float(d)
        out.append(error_norms(coarse, block_average(fine), vol)[1])
    return out


def rates_from_differences(diffs) -> list[float]:
    """Runge rates for consecutive differences; NaN where undefined."""
    rates = []
    for a, b in zip(diffs[:-1], diffs[1:]):
        try:
            rates.append(runge_rate(a, b))
        except NonPositive:
            rates.append(float("nan"))
    return rates
