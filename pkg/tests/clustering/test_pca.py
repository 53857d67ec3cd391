import pytest
from numpy import abs as np_abs, arange, argmax, column_stack, eye, zeros
from numpy.random import default_rng
from numpy.testing import assert_allclose

from peeratt.clustering.pca import fit_pca
from peeratt.core.errors import EmptyInputError, ShapeError


def test_points_on_a_line():
    x = arange(10, dtype=float)
    model, projected = fit_pca(column_stack([x, zeros(10)]))
    assert_allclose(model.components, [[1.0, 0.0], [0.0, 1.0]], atol=1e-12)
    assert_allclose(model.explained_variance_ratio, [1.0, 0.0], atol=1e-12)
    # The constant column is only centered
    assert model.scale[1] == 1.0
    assert_allclose(projected[:, 1], 0.0, atol=1e-12)


def test_isotropic_cloud_has_flat_spectrum():
    data = default_rng(0).normal(size=(5000, 3))
    model, _ = fit_pca(data)
    assert_allclose(model.explained_variance_ratio, [1 / 3] * 3, atol=0.03)
    assert model.explained_variance_ratio.sum() == pytest.approx(1.0)
    assert (model.explained_variance[:-1] >= model.explained_variance[1:]).all()


def test_full_rank_projection_is_lossless():
    data = default_rng(1).normal(size=(40, 5)) * [1.0, 2.0, 3.0, 0.5, 10.0]
    for standardize in (True, False):
        model, projected = fit_pca(data, standardize=standardize)
        assert_allclose(model.transform(data), projected, atol=1e-10)
        assert_allclose(model.inverse_transform(projected), data, atol=1e-10)


def test_axes_are_orthonormal_and_signed():
    data = default_rng(2).normal(size=(60, 6)) @ default_rng(3).normal(size=(6, 6))
    model, _ = fit_pca(data)
    assert_allclose(model.components @ model.components.T, eye(6), atol=1e-10)
    pivots = argmax(np_abs(model.components), axis=1)
    assert (model.components[arange(6), pivots] > 0.0).all()


def test_truncation_keeps_leading_axes():
    data = default_rng(4).normal(size=(30, 4))
    full, projected = fit_pca(data)
    model, truncated = fit_pca(data, n_components=2)
    assert model.n_components == 2
    assert_allclose(truncated, projected[:, :2], atol=1e-12)
    assert_allclose(full.truncate(2).components, model.components)
    with pytest.raises(ShapeError):
        full.truncate(5)


def test_invalid_inputs():
    with pytest.raises(ShapeError):
        fit_pca(arange(5.0))
    with pytest.raises(ShapeError):
        fit_pca(zeros((1, 3)))
    with pytest.raises(ShapeError):
        fit_pca(zeros((4, 3)), n_components=4)
    with pytest.raises(EmptyInputError):
        fit_pca(zeros((0, 3)))
