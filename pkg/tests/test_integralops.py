import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from zeromodes import fields as fl
from zeromodes import integralops as io_
from zeromodes.exceptions import AccuracyError, DomainError

LY = fl.loss_yau()
W = LY.params["w_unit"]
SMALL = io_.SingularQuadSpec(16, 24, 8, 16, rtol=1.0, max_refine=1)


@pytest.mark.parametrize("x", [[0, 0, 0], [1, 0, 0], [0.3, -0.7, 1.5]])
def test_biot_savart_coulomb_gauge(x):
    x = np.array(x, float)
    res = io_.biot_savart(LY, x)
    assert_allclose(res.value, fl.loss_yau_coulomb_A(x, W), atol=1e-10)
    assert res.error < 1e-6


def test_biot_savart_origin_value():
    # the divergence-free potential is 4w at the origin, not the 3w of the closed form
    assert_allclose(io_.biot_savart(LY, np.zeros(3)).value, 4 * W, atol=1e-10)


def test_biot_savart_zero_field():
    res = io_.biot_savart(lambda y: np.zeros_like(y), np.ones(3))
    assert_allclose(res.value, 0)


def test_curl_div_of_biot_savart():
    x = np.array([0.5, 0.5, 0.5])
    aud = io_.curl_div_audit(lambda p: io_.biot_savart(LY, p).value, x, h=5e-3,
                             B=lambda p: fl.loss_yau_B_closed(p, W))
    assert aud.curl_residual < 5e-3 and aud.div < 5e-3


def test_curl_div_closed_form_not_coulomb():
    aud = io_.curl_div_audit(lambda p: fl.loss_yau_A_closed(p, W), np.array([0.5, 0.2, 0.1]))
    assert aud.div > 0.1


@pytest.mark.parametrize("x", [[0, 0, 0], [1 / np.sqrt(2), 1 / np.sqrt(2), 0]])
def test_green_fixed_point(x):
    x = np.array(x)
    g = io_.dirac_green_convolve(io_.zero_mode_source(LY), x)
    psi = fl.eval_family(LY, "psi", x, order=0).val
    assert np.linalg.norm(g.value - psi) / np.linalg.norm(psi) < 2e-3


def test_green_zero_source():
    g = io_.dirac_green_convolve(lambda y: np.zeros(y.shape[:-1] + (2,), complex), np.zeros(3))
    assert_allclose(g.value, 0)


@pytest.mark.parametrize("x", [[1, 0, 0], [0, 1, 1]])
def test_gauge_difference_is_curl_free(x):
    mono = fl.monopole()
    r = io_.gauge_difference_check(io_.family_vector(mono, "A"),
                                   io_.family_vector(mono, "A_prime"), np.array(x, float))
    assert r < 1e-8


def test_gauge_difference_identical_fields():
    A = io_.family_vector(fl.monopole(), "A")
    assert io_.gauge_difference_check(A, A, np.array([1.0, 0.5, 0.2])) == 0


def test_gauge_difference_on_axis():
    A = io_.family_vector(fl.monopole(), "A")
    with pytest.raises(DomainError):
        io_.gauge_difference_check(A, A, np.array([0, 0, 1.0]))


@given(st.floats(-2, 2), st.floats(-2, 2))
def test_biot_savart_linear(a, b):
    B1 = io_.b_field(LY)

    def B2(y):
        return np.exp(-np.sum(y * y, axis=-1))[..., None] * np.array([0.0, 1.0, 0.5])

    x = np.array([0.2, -0.1, 0.4])
    lhs = io_.biot_savart(lambda y: a * B1(y) + b * B2(y), x, SMALL).value
    rhs = a * io_.biot_savart(B1, x, SMALL).value + b * io_.biot_savart(B2, x, SMALL).value
    assert_allclose(lhs, rhs, atol=1e-12)


def test_accuracy_error_carries_estimate():
    spec = io_.SingularQuadSpec(8, 8, 4, 8, rtol=1e-30, max_refine=1)
    with pytest.raises(AccuracyError) as info:
        io_.biot_savart(LY, np.ones(3), spec)
    assert info.value.estimate.shape == (3,)
    assert np.isfinite(info.value.error)
