import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from zeromodes import fields as fl
from zeromodes import norms
from zeromodes.exceptions import DivergenceError, UnsupportedError, ValidationError


def test_constants():
    assert_allclose(norms.sphere_area(2), 4 * math.pi)
    assert_allclose(norms.sphere_area(3), 2 * math.pi**2)
    assert_allclose(norms.sobolev(3), 3 * (math.pi / 2) ** (4 / 3))
    assert_allclose(norms.Constants.magnetic_bound(3), 2 * norms.sobolev(3))
    assert_allclose(norms.Constants.weak_bound(), 0.5 * (4 * math.pi / 3) ** (2 / 3))
    assert_allclose(norms.z_from_quotient(32 * math.pi / 3), 4 / (3 * norms.ALPHA**2))


@pytest.mark.parametrize("d", [3, 4, 10])
def test_hijazi_constant(d):
    assert norms.hijazi_constant_check(d) < 1e-12 * norms.sobolev(d)


@pytest.mark.parametrize("p,d,exact", [
    (3, 3, (math.pi**2 / 4) ** (1 / 3)),
    (2, 3, (math.pi**2) ** 0.5),           # 4 pi int r^2/(1+r^2)^2 = pi^2
    (1, 2, None),                          # divergent: 2 pi int r/(1+r^2)
])
def test_lp_rational(p, d, exact):
    prof = norms.rational_profile(1.0, 1.0)
    if exact is None:
        with pytest.raises(DivergenceError):
            norms.lp_norm_radial(prof, p, d)
    else:
        assert_allclose(norms.lp_norm_radial(prof, p, d), exact, rtol=1e-12)


def test_lp_loss_yau_field_strength():
    B = norms.lp_norm_radial(norms.family_profile(fl.loss_yau(), "B"), 1.5, 3)
    assert_allclose(B, 4 * norms.sobolev(3), rtol=1e-10)


@pytest.mark.parametrize("prof,p,exact", [
    (norms.power_profile(0.5, 2), 1.5, 0.5 * (4 * math.pi / 3) ** (2 / 3)),
    (norms.rational_profile(1.0, 1.0), 1.5, (4 * math.pi / 3) ** (2 / 3)),
    (norms.power_profile(0.25, 2), 1.5, 0.25 * (4 * math.pi / 3) ** (2 / 3)),
])
def test_weak_norm_examples(prof, p, exact):
    assert_allclose(norms.weak_lp_radial(prof, p), exact, rtol=1e-9)
    assert_allclose(norms.weak_lp_distribution(prof, p), exact, rtol=1e-6)


def test_weak_requires_monotone():
    bump = norms.RadialProfile(lambda r: r * np.exp(-r), True)
    with pytest.raises(ValidationError):
        norms.weak_lp_radial(bump, 1.5)
    with pytest.raises(UnsupportedError):
        norms.weak_lp_radial(norms.RadialProfile(lambda r: r), 1.5)


def test_weak_unbounded():
    with pytest.raises(DivergenceError):
        norms.weak_lp_radial(norms.power_profile(1.0, 1.0), 1.5)


def test_monopole_weak_saturation():
    rep = norms.bound_table("MAGNETICWEAK", fl.monopole())
    assert_allclose(rep.ratio, 1, atol=1e-12)
    assert rep.equality
    assert_allclose(norms.bound_table("HARDY_WEAK").lhs, 0.25, rtol=1e-13)


def test_zc_loss_yau():
    zc = norms.zc_quotient(fl.loss_yau())
    assert_allclose(zc.quotient, 9 * math.pi**3, rtol=1e-10)
    assert zc.ratio > 1
    assert_allclose(zc.z, 208507.46, rtol=1e-6)


def test_zc_monopole_diverges():
    with pytest.raises(DivergenceError):
        norms.zc_quotient(fl.monopole())


@pytest.mark.parametrize("theorem,family,d,ratio", [
    ("MAGNETIC", "LOSS_YAU", 3, 2.0),
    ("GENMAGNETIC", "APPENDIX_A", 5, 2.0),
    ("GENMAGNETIC", "DUNNE_MIN", 7, 2.0),
    ("SPINORGENERAL", "SPINOR_D", 5, 1.0),
    ("SPINOR", "SPINOR_D", 3, 1.0),
    ("SPIN_HLS", "HLS_D", 5, 1.0),
    ("IMPROVEDZ", "LOSS_YAU", 3, 27 * math.pi**2 / 32),
])
def test_bound_examples(theorem, family, d, ratio):
    rep = norms.bound_table(theorem, family, d)
    assert_allclose(rep.ratio, ratio, rtol=1e-8)
    assert rep.equality == (abs(ratio - 1) < 1e-6)


def test_bound_errors():
    with pytest.raises(ValidationError):
        norms.bound_table("NOPE", "LOSS_YAU")
    with pytest.raises(ValidationError):
        norms.bound_table("MAGNETIC", "APPENDIX_A", 5)
    with pytest.raises(ValidationError):
        norms.bound_table("SPINOR", "SPINOR_D", 4)


@given(st.lists(st.floats(-1, 1), min_size=4, max_size=4).filter(
    lambda v: np.linalg.norm(v) > 0.1))
def test_magnetic_ratio_independent_of_phi0(v):
    phi0 = np.array([v[0] + 1j * v[1], v[2] + 1j * v[3]])
    rep = norms.bound_table("MAGNETIC", fl.loss_yau(phi0))
    assert_allclose(rep.ratio, 2.0, rtol=1e-9)


@given(st.floats(0.1, 10.0), st.floats(1.0, 3.0))
def test_weak_routes_agree(c, b):
    prof = norms.rational_profile(c, b)
    assert_allclose(norms.weak_lp_radial(prof, 1.5),
                    norms.weak_lp_distribution(prof, 1.5), rtol=1e-6)


def test_green_radial_integrals():
    for e in norms.green_radial_integrals():
        assert e.err < 1e-10, e.name


def test_byparts_loss_yau():
    ly = fl.loss_yau()
    eta = norms.bump_spinor(ly.params["phi0"], radius=2.0)
    res = norms.integral_byparts_check(ly.psi_fn, eta, ly.A_fn, ly.rep, box=2.05, order=24)
    assert res.gap < 1e-6
    assert abs(res.lhs) > 1e-2


def test_byparts_free():
    ly = fl.loss_yau()
    eta = norms.bump_spinor(ly.params["phi0"], radius=1.0)
    res = norms.integral_byparts_check(eta, eta, None, ly.rep, box=1.05, order=16)
    assert res.gap < 1e-8


def test_byparts_appendix_d5():
    app = fl.appendix_a(5)
    eta = norms.bump_spinor(app.params["phi"], radius=1.5, a=16.0)
    res = norms.integral_byparts_check(app.psi_fn, eta, app.A_fn, app.rep, box=1.55, order=12,
                                       rule="trapezoid")
    assert res.gap < 1e-5


def test_byparts_support_check():
    ly = fl.loss_yau()
    eta = norms.bump_spinor(ly.params["phi0"], radius=2.0)
    with pytest.raises(ValidationError):
        norms.integral_byparts_check(ly.psi_fn, eta, ly.A_fn, ly.rep, box=1.9)
