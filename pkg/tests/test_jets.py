import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from zeromodes.jets import stack, variables

coords = st.lists(st.floats(-2, 2), min_size=3, max_size=3)


def test_variables_seed_identity():
    X = variables(np.array([[1.0, 2.0, 3.0]]))
    assert_allclose(X.grad[0], np.eye(3))
    assert_allclose(X.hess, 0)
    assert X.order == 2 and X.dim == 3


@given(coords)
def test_product_rule(x):
    X = variables(np.array(x))
    f = X.comp(0) * X.comp(1) * X.comp(1)
    a, b, _ = x
    assert_allclose(f.val, a * b * b)
    assert_allclose(f.grad, [b * b, 2 * a * b, 0], atol=1e-12)
    assert_allclose(f.hess, [[0, 2 * b, 0], [2 * b, 2 * a, 0], [0, 0, 0]], atol=1e-12)


@given(coords)
def test_reciprocal_radial(x):
    X = variables(np.array(x))
    r2 = (X * X).sum()
    f = (1 + r2).reciprocal()
    v = np.asarray(x)
    s = 1 + v @ v
    assert_allclose(f.grad, -2 * v / s**2, atol=1e-12)
    H = 8 * np.outer(v, v) / s**3 - 2 * np.eye(3) / s**2
    assert_allclose(f.hess, H, atol=1e-12)
    # laplacian of 1/(1+r^2) in 3d
    assert_allclose(f.laplacian(), (2 * (v @ v) - 6) / s**3, atol=1e-12)


@pytest.mark.parametrize("fn,df", [
    ("exp", np.exp),
    ("sqrt", lambda t: 0.5 / np.sqrt(t)),
    ("arctan", lambda t: 1 / (1 + t * t)),
])
def test_elementary_derivatives(fn, df):
    x = np.array([0.7, 1.3])
    X = variables(x)
    f = getattr(X.comp(1), fn)()
    assert_allclose(f.grad, [0, df(1.3)], rtol=1e-13)


def test_complex_and_stack():
    X = variables(np.array([[0.2, -0.5, 1.0]]))
    z = X.comp(0) + 1j * X.comp(1)
    v = stack([z, z.conj()])
    assert v.shape == (1, 2)
    assert_allclose(v.grad[0, 0], [1, 1j, 0])
    assert_allclose(v.grad[0, 1], [1, -1j, 0])
    assert_allclose((z * z.conj()).real.val, 0.29)
