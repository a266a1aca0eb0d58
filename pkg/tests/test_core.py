import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mrsw.core import (ConfigInvalid, DepthTooSmall, Flat, Gaussian, Grid1D, ModelConfig,
                       Tabulated, UnknownDescriptor, conserved_from_primitives, coriolis_at,
                       evaluate_topography, grid_2d, primitives_from_conserved,
                       topography_profile)


def test_grid1d_spacing_and_centers():
    g = Grid1D(100, -10.0, 10.0)
    assert g.dy == 0.2
    assert g.centers[0] == pytest.approx(-9.9)
    assert g.interfaces.shape == (101,)
    np.testing.assert_allclose(np.diff(g.interfaces), g.dy, rtol=0, atol=1e-14)


@pytest.mark.parametrize("n", [0, 4])
def test_grid1d_rejects_small_meshes(n):
    with pytest.raises(ConfigInvalid):
        Grid1D(n, 0.0, 1.0)


def test_grid1d_rejects_reversed_bounds():
    with pytest.raises(ConfigInvalid):
        Grid1D(10, 1.0, 0.0)


def test_grid2d_mesh_indexing():
    g = grid_2d(6, 8, -1.0, 1.0)
    X, Y = g.mesh()
    assert X.shape == (6, 8)
    assert np.all(X[:, 0] == g.x.centers) and np.all(Y[0] == g.y.centers)
    assert g.cell_volume == g.dx * g.dy


@pytest.mark.parametrize("fc,beta,y,expected", [(1.0, 0.0, 3.0, 1.0), (0.0, 0.1, 2.0, 0.2),
                                                (0.0, 0.0, 7.0, 0.0)])
def test_coriolis_at(fc, beta, y, expected):
    assert coriolis_at(ModelConfig(f_c=fc, beta=beta), y) == pytest.approx(expected, abs=1e-16)


@given(st.floats(-50, 50), st.floats(-50, 50), st.floats(-2, 2), st.floats(-1, 1))
def test_coriolis_is_affine(y1, y2, fc, beta):
    cfg = ModelConfig(f_c=fc, beta=beta)
    lhs = coriolis_at(cfg, y1) + coriolis_at(cfg, y2)
    rhs = coriolis_at(cfg, y1 + y2) + coriolis_at(cfg, 0.0)
    scale = max(abs(coriolis_at(cfg, y)) for y in (y1, y2, y1 + y2, 0.0))
    assert abs(lhs - rhs) <= 2 * np.spacing(scale)


@pytest.mark.parametrize("kwargs", [{"g": 0.0}, {"theta": 0.9}, {"theta": 2.1}, {"cfl": 0.0},
                                    {"cfl": 0.6}, {"variant": "XYZ"}])
def test_model_config_validation(kwargs):
    with pytest.raises(ConfigInvalid):
        ModelConfig(**kwargs)


def test_primitives_unit_depth():
    p = primitives_from_conserved(np.array([[1.0], [0.5], [0.0], [3.0], [0.0], [0.0]]))
    assert p["u"][0] == 0.5 and p["a"][0] == 3.0


def test_primitives_exact_division():
    p = primitives_from_conserved(np.array([[2.0], [1.0], [4.0], [0.0], [6.0], [0.0]]))
    assert [p[k][0] for k in "huvab"] == [2.0, 0.5, 2.0, 0.0, 3.0]


def test_primitives_depth_floor():
    with pytest.raises(DepthTooSmall):
        primitives_from_conserved(np.array([[1e-13], [1.0], [0], [0], [0], [0]]))


@given(st.floats(2e-12, 1e6),
       st.lists(st.floats(-100, 100, allow_subnormal=False), min_size=4, max_size=4))
def test_conserved_primitive_round_trip(h, prims):
    w = conserved_from_primitives(np.array([h]), *prims, 0.0)
    p = primitives_from_conserved(w)
    for name, val in zip("uvab", prims):
        assert abs(p[name][0] - val) <= np.spacing(abs(val))


def test_topography_descriptors():
    g = Grid1D(10, -1.0, 1.0)
    assert np.all(topography_profile(Flat(), g).centers == 0.0)
    assert evaluate_topography(Gaussian(0.5, 0.0, 1.0), np.array([0.0]))[0] == 0.5
    z = evaluate_topography(Gaussian(0.05, 0.0, 1.0, "r"), np.array([0.0]), np.array([0.0]))
    assert z[0] == 0.05
    tab = Tabulated((0.0, 1.0), (0.0, 2.0))
    np.testing.assert_allclose(evaluate_topography(tab, np.array([0.5, 2.0])), [1.0, 4.0])


def test_unknown_descriptor():
    with pytest.raises(UnknownDescriptor):
        evaluate_topography("hill", np.zeros(3))


def test_topography_profile_padding_2d():
    g = grid_2d(6, 7, -1.0, 1.0)
    t = topography_profile(Gaussian(1.0, 0.0, 1.0, "y"), g, 2)
    assert t.padded.shape == (10, 11)
    np.testing.assert_array_equal(t.centers, t.padded[2:-2, 2:-2])
