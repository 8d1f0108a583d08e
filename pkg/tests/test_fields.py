import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gchs import DimensionMismatch, ScalarField
from gchs.fields import as_field, fd_gradient, fd_hessian, fd_jacobian, stencil_jacobian


def test_fd_gradient_of_linear_field():
    c = np.array([0.5, -2.0, 3.0])
    g = fd_gradient(lambda x: float(c @ x), np.array([10.0, -0.2, 7.0]))
    np.testing.assert_allclose(g, c, rtol=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=1, max_size=4))
def test_fd_gradient_matches_analytic(x):
    x = np.array(x)
    g = fd_gradient(lambda y: float(np.sum(np.sin(y) * y)), x)
    np.testing.assert_allclose(g, np.sin(x) + x * np.cos(x), atol=1e-8)


def test_jacobian_layouts():
    F = lambda x: np.array([x[0] * x[1], np.sin(x[1])])
    x = np.array([0.3, 0.7])
    expected = np.array([[x[1], x[0]], [0.0, np.cos(x[1])]])
    np.testing.assert_allclose(fd_jacobian(F, x), expected, atol=1e-9)
    np.testing.assert_allclose(stencil_jacobian(F, x), expected, atol=1e-11)


def test_hessian_routes():
    f = lambda x: x[0] ** 2 * x[1] + np.exp(x[1])
    x = np.array([0.4, -0.3])
    expected = np.array([[2 * x[1], 2 * x[0]], [2 * x[0], np.exp(x[1])]])
    np.testing.assert_allclose(fd_hessian(f, x), expected, atol=1e-6)
    grad = lambda y: np.array([2 * y[0] * y[1], y[0] ** 2 + np.exp(y[1])])
    H = ScalarField(f, grad=grad).hessian(x)
    np.testing.assert_allclose(H, expected, atol=1e-8)
    assert np.array_equal(H, H.T)


def test_scalar_field_helpers():
    c = ScalarField.constant(2.5)
    assert c(np.zeros(3)) == 2.5 and not c.gradient(np.ones(3)).any()
    q = ScalarField.coordinate(1)
    np.testing.assert_array_equal(q.gradient(np.zeros(3)), [0.0, 1.0, 0.0])
    np.testing.assert_allclose(ScalarField.coordinate(1, analytic=False).gradient(np.ones(3)), [0.0, 1.0, 0.0])
    assert as_field(4.0)(np.zeros(2)) == 4.0
    assert as_field(lambda x: x[0])(np.array([3.0])) == 3.0
    with pytest.raises(DimensionMismatch):
        ScalarField(lambda x: 0.0, dim=3).check_dim(2)
