"""Three-stage strong-stability-preserving Runge-Kutta time stepping."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import MRSWError


class NonFiniteState(MRSWError, ArithmeticError):
    """A Runge-Kutta stage produced NaN or infinity."""


def max_dt(speeds, spacing, cfl: float) -> float:
    """Largest stable time step.

    Args:
        speeds: ``(s_plus, s_minus)`` in 1-D, or a pair of such tuples
            ``((sx_plus, sx_minus), (sy_plus, sy_minus))`` in 2-D.
        spacing: ``dy`` in 1-D, ``(dx, dy)`` in 2-D.
        cfl: Courant number.
    """
    if np.ndim(spacing) == 0:
        pairs, deltas = [speeds], [float(spacing)]
    else:
        pairs, deltas = list(speeds), [float(d) for d in spacing]
    candidates = []
    for (sp, sm), d in zip(pairs, deltas):
        amax = max(float(np.max(sp)), float(np.max(-sm)))
        if amax > 0.0:
            candidates.append(d / amax)
    if not candidates:
        return cfl * min(deltas)
    return cfl * min(candidates)


def ssp_rk3_step(w: np.ndarray, rhs: Callable[[np.ndarray], np.ndarray], dt: float,
                 l0: np.ndarray | None = None) -> np.ndarray:
    """One SSP-RK3 step; ``l0`` may carry an already evaluated ``rhs(w)``."""
    if l0 is None:
        l0 = rhs(w)
    w1 = w + dt * l0
    _check(w1)
    w2 = 0.75 * w + 0.25 * (w1 + dt * rhs(w1))
    _check(w2)
    wn = w / 3.0 + 2.0 / 3.0 * (w2 + dt * rhs(w2))
    _check(wn)
    return wn


def _check(w):
    if not np.all(np.isfinite(w)):
        raise NonFiniteState("non-finite value in Runge-Kutta stage")


@dataclass
class RunResult:
    w: np.ndarray
    t: float
    steps: int
    dts: list[float] = field(default_factory=list)


def integrate(w0: np.ndarray, rhs_and_dt: Callable[[np.ndarray], tuple[np.ndarray, float]],
              t_end: float, *, stop_times=(), callback=None, max_steps: int = 10**7) -> RunResult:
    """March from ``t = 0`` to ``t_end``.

    The step size is chosen once per step from the first stage; steps are
    shortened to land exactly on every entry of ``stop_times`` and on
    ``t_end``.

    Args:
        w0: initial state.
        rhs_and_dt: returns ``(rhs(w), stable_dt(w))``.
        t_end: final time.
        stop_times: intermediate times that must be hit exactly.
        callback: called as ``callback(t, w, step)`` after the initial state
            and after every step.
    """
    stops = sorted({float(s) for s in stop_times if 0.0 < s < t_end} | {float(t_end)})
    w, t, steps, dts = np.array(w0, dtype=np.float64, copy=True), 0.0, 0, []
    if callback is not None:
        callback(t, w, steps)
    rhs = lambda x: rhs_and_dt(x)[0]  # noqa: E731
    for stop in stops:
        while t < stop:
            l0, dt = rhs_and_dt(w)
            if dt >= stop - t:
                dt, t_next = stop - t, stop
            else:
                t_next = t + dt
            w = ssp_rk3_step(w, rhs, dt, l0)
            t, steps = t_next, steps + 1
            dts.append(dt)
            if callback is not None:
                callback(t, w, steps)
            if steps > max_steps:
                raise RuntimeError("step limit exceeded")
    return RunResult(w, t, steps, dts)
