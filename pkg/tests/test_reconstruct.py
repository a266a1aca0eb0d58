import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mrsw.reconstruct import (EmptyInput, TooShort, WenoZConfig, divergence_sigma,
                              linear_reconstruct, magnetic_interface_2d, minmod, minmod3,
                              minmod_slopes, weno_z_faces, weno_z_value)

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_subnormal=False)


@pytest.mark.parametrize("vals,expected", [((1, 2, 3), 1), ((-2, -1, -3), -1), ((1, -1, 2), 0)])
def test_minmod_examples(vals, expected):
    assert minmod(vals) == expected


def test_minmod_empty():
    with pytest.raises(EmptyInput):
        minmod([])


@given(st.lists(finite, min_size=1, max_size=6))
def test_minmod_sign_and_magnitude(vals):
    m = minmod(vals)
    assert m == 0 or all(np.sign(v) == np.sign(m) for v in vals)
    assert abs(m) <= min(abs(v) for v in vals)
    assert minmod([-v for v in vals]) == -m


@given(arrays(np.float64, (3, 7), elements=finite))
def test_minmod3_matches_scalar_and_is_odd(a):
    m = minmod3(a[0], a[1], a[2])
    expect = [minmod(a[:, i]) for i in range(a.shape[1])]
    np.testing.assert_array_equal(m, expect)
    np.testing.assert_array_equal(minmod3(-a[0], -a[1], -a[2]), -m)


@pytest.mark.parametrize("theta", [1.0, 1.3, 2.0])
def test_linear_data_is_reproduced(theta):
    y = np.linspace(-1, 1, 11)
    d = y[1] - y[0]
    slopes, minus, plus = linear_reconstruct(2 * y, d, theta)
    np.testing.assert_allclose(slopes, 2.0, rtol=1e-13)
    faces = 0.5 * (y[1:-2] + y[2:-1])
    np.testing.assert_allclose(minus, 2 * faces, atol=1e-14)
    np.testing.assert_allclose(plus, 2 * faces, atol=1e-14)


def test_constant_data():
    slopes, minus, plus = linear_reconstruct(np.full(6, 3.5), 0.1, 1.3)
    assert np.all(slopes == 0) and np.all(minus == 3.5) and np.all(plus == 3.5)


def test_local_extremum_has_zero_slope():
    assert minmod_slopes(np.array([0.0, 1.0, 0.0]), 1.0, 1.3)[0] == 0.0


def test_linear_reconstruct_too_short():
    with pytest.raises(TooShort):
        linear_reconstruct(np.array([1.0, 2.0]), 1.0, 1.3)


@given(arrays(np.float64, 12, elements=finite), st.floats(1.0, 2.0))
def test_reconstruction_is_bounded(psi, theta):
    _, minus, plus = linear_reconstruct(psi, 0.5, theta)
    tol = 1e-12 * (1 + np.max(np.abs(psi)))
    assert max(minus.max(), plus.max()) <= psi.max() + tol
    assert min(minus.min(), plus.min()) >= psi.min() - tol


@given(arrays(np.float64, 10, elements=finite), st.sampled_from([-4.0, -0.5, 0.25, 2.0, 8.0]))
def test_reconstructions_scale_equivariant(psi, c):
    # Powers of two keep the scaling exact.
    s1 = minmod_slopes(c * psi, 0.3, 1.3)
    np.testing.assert_array_equal(s1, c * minmod_slopes(psi, 0.3, 1.3))
    r1, l1 = weno_z_faces(c * psi)
    r0, l0 = weno_z_faces(psi)
    np.testing.assert_allclose(r1, c * r0, rtol=1e-12, atol=1e-9)
    np.testing.assert_allclose(l1, c * l0, rtol=1e-12, atol=1e-9)


def test_weno_constant():
    assert weno_z_value([2.5] * 5) == 2.5


def _weno_symbolic(p):
    """Direct exact-arithmetic evaluation of the five-point WENO-Z interpolant."""
    R = sp.Rational
    p0, p1, p2, p3, p4 = [R(v) for v in p]
    cand = [R(3, 8) * p0 - R(5, 4) * p1 + R(15, 8) * p2,
            -R(1, 8) * p1 + R(3, 4) * p2 + R(3, 8) * p3,
            R(3, 8) * p2 + R(3, 4) * p3 - R(1, 8) * p4]
    beta = [R(13, 12) * (p0 - 2 * p1 + p2) ** 2 + R(1, 4) * (p0 - 4 * p1 + 3 * p2) ** 2,
            R(13, 12) * (p1 - 2 * p2 + p3) ** 2 + R(1, 4) * (p1 - p3) ** 2,
            R(13, 12) * (p2 - 2 * p3 + p4) ** 2 + R(1, 4) * (3 * p2 - 4 * p3 + p4) ** 2]
    tau = abs(beta[2] - beta[0])
    eps = R(1, 10**12)
    alpha = [d * (1 + (tau / (b + eps)) ** 2) for d, b in zip((R(1, 16), R(5, 8), R(5, 16)), beta)]
    return sum(a * q for a, q in zip(alpha, cand)) / sum(alpha)


def test_weno_single_spike_matches_symbolic_evaluation():
    exact = _weno_symbolic((0, 0, 1, 0, 0))
    assert weno_z_value([0, 0, 1, 0, 0]) == pytest.approx(float(exact), rel=1e-15)
    assert weno_z_value([0, 0, 1, 0, 0]) == 45 / 64


@given(st.lists(st.integers(-50, 50), min_size=5, max_size=5))
def test_weno_agrees_with_symbolic_evaluation(p):
    exact = float(_weno_symbolic(p))
    assert weno_z_value(p) == pytest.approx(exact, rel=1e-13, abs=1e-13)


@given(finite, finite, finite, st.floats(-5, 5))
def test_weno_reproduces_sampled_quadratics(c0, c1, c2, y0):
    y = y0 + np.arange(-2, 3) * 0.5
    vals = c0 + c1 * y + c2 * y * y
    target = y0 + 0.25
    exact = c0 + c1 * target + c2 * target * target
    scale = max(np.max(np.abs(vals)), abs(c0), abs(c1 * target), abs(c2) * target * target)
    assert abs(weno_z_value(vals) - exact) <= 10 * np.spacing(scale)


def test_weno_mirror_gives_left_face_value():
    psi = np.array([0.3, 1.1, -0.4, 2.0, 0.7, 1.5])
    right, left = weno_z_faces(psi)
    assert right[0] == weno_z_value(psi[0:5])
    assert left[1] == weno_z_value(psi[1:6][::-1])


def test_weno_config_weights_sum_to_one():
    c = WenoZConfig()
    assert c.d0 + c.d1 + c.d2 == 1.0 and c.eps == 1e-12 and c.r == 2


def test_sigma_examples():
    one = np.array([1.0])
    assert divergence_sigma(np.array([0.5]), one, np.array([2.0]), one)[0] == 0.5
    assert divergence_sigma(np.array([-0.5]), one, np.array([2.0]), one)[0] == 0.0


def test_magnetic_faces_zero_divergence_source():
    ha, hb = np.array([0.7]), np.array([-0.2])
    z = np.zeros(1)
    e, w, n, s, _ = magnetic_interface_2d(ha, hb, z, z, np.array([0.3]), np.array([0.1]), 0.1, 0.1)
    assert e[0] == w[0] == 0.7 and n[0] == s[0] == -0.2


@given(arrays(np.float64, (4, 9), elements=finite))
def test_magnetic_face_slopes_cancel_when_divergence_free(x):
    A = x[0]
    B = -A
    _, _, _, _, sigma = magnetic_interface_2d(x[1], x[2], A, B, x[3], x[3][::-1], 0.1, 0.1)
    np.testing.assert_array_equal(sigma * A + sigma * B, 0.0)
