import numpy as np
import pytest

from mrsw.timeint import NonFiniteState, integrate, max_dt, ssp_rk3_step


def test_max_dt_1d():
    assert max_dt((np.array([1.0, 0.5]), np.array([-0.2, -0.9])), 0.2, 0.25) == pytest.approx(0.05)


def test_max_dt_2d():
    sx = (np.array([2.0]), np.array([-1.0]))
    sy = (np.array([1.0]), np.array([-0.5]))
    assert max_dt((sx, sy), (0.1, 0.1), 0.25) == pytest.approx(0.0125)


def test_max_dt_quiescent_fallback():
    z = (np.zeros(3), np.zeros(3))
    assert max_dt((z, z), (0.1, 0.2), 0.25) == 0.025


def test_zero_rhs_is_identity():
    w = np.array([1.0, -2.0, 3.0])
    assert np.array_equal(ssp_rk3_step(w, lambda x: 0 * x, 0.1), w)


def test_stability_polynomial():
    z = -0.1
    got = ssp_rk3_step(np.array([1.0]), lambda x: z * x, 1.0)[0]
    assert abs(got - (1 + z + z**2 / 2 + z**3 / 6)) <= 1e-15


def test_third_order_convergence():
    def err(n):
        w, dt = np.array([1.0]), 1.0 / n
        for _ in range(n):
            w = ssp_rk3_step(w, np.sin, dt)
        # Exact solution of w' = sin(w): tan(w/2) = tan(w0/2) e^t.
        exact = 2 * np.arctan(np.tan(0.5) * np.e)
        return abs(w[0] - exact)

    ratio = err(160) / err(320)
    assert 7.0 < ratio < 9.0


def test_stage_coefficients_are_convex():
    # One stage with L = identity: w1 = 2w, w2 = 3/4 w + 1/4 (w1 + w1) = 7/4 w, ...
    got = ssp_rk3_step(np.array([1.0]), lambda x: x, 1.0)[0]
    assert got == 1.0 / 3.0 + 2.0 / 3.0 * (7.0 / 4.0 + 7.0 / 4.0)


def test_non_finite_stage_raises():
    with pytest.raises(NonFiniteState):
        ssp_rk3_step(np.array([1.0]), lambda x: x * np.inf, 1.0)


def test_integrate_lands_on_stops_and_end():
    seen = []
    res = integrate(np.array([1.0]), lambda w: (-w, 0.3), 1.0, stop_times=(0.5,),
                    callback=lambda t, w, s: seen.append(t))
    assert 0.5 in seen and seen[0] == 0.0 and seen[-1] == 1.0 and res.t == 1.0
    assert max(res.dts) <= 0.3


def test_integrate_zero_time_returns_initial_state():
    w0 = np.array([2.0, 3.0])
    res = integrate(w0, lambda w: (w, 0.1), 0.0)
    assert res.steps == 0 and np.array_equal(res.w, w0)
