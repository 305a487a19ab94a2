import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from zeromodes import clifford as cl
from zeromodes.exceptions import (InvalidDimensionError, NoIntertwinerError, UnsupportedError,
                                  ValidationError)

S1, S2, S3 = cl.SIGMA


@pytest.mark.parametrize("d", range(2, 11))
def test_gamma_rep_relations(d):
    rep = cl.gamma_rep(d)
    assert rep.N == 2 ** (d // 2)
    assert rep.anticommutator_residual() == 0
    assert rep.hermiticity_residual() == 0


@pytest.mark.parametrize("d", [1, 11, 2.5])
def test_gamma_rep_rejects(d):
    with pytest.raises(InvalidDimensionError):
        cl.gamma_rep(d)


def test_d3_ladder_and_vacuum():
    rep = cl.gamma_rep(3)
    lad = cl.ladder_ops(rep)
    assert_allclose(lad.cs[0], (S2 + 1j * S3) / 2)
    assert_allclose(lad.cs[0] @ lad.cs[0], 0)
    vac = cl.find_vacuum(rep, lad)
    overlap = abs(np.vdot(vac.phi, np.array([1, 1]) / np.sqrt(2)))
    assert_allclose(overlap, 1, atol=1e-14)
    om = cl.omega_matrix(vac.rep, vac).omega
    assert_allclose(om, [[0, 0, 0], [0, 0, -1], [0, 1, 0]], atol=1e-14)


@pytest.mark.parametrize("d", [3, 5, 7, 9])
def test_omega_canonical_and_fock(d):
    rep = cl.gamma_rep(d)
    lad = cl.ladder_ops(rep)
    assert lad.car_residual() < 1e-14
    vac = cl.find_vacuum(rep, lad)
    lv = cl.ladder_ops(vac.rep)
    for c in lv.cs:
        assert np.linalg.norm(c @ vac.phi) < 1e-13
    assert_allclose(cl.omega_matrix(vac.rep, vac).omega, cl.canonical_omega(d), atol=1e-13)
    F = cl.fock_basis(lv, vac)
    assert_allclose(F.conj() @ F.T, np.eye(rep.N), atol=1e-13)


def test_d5_double_creation_vanishes():
    rep = cl.gamma_rep(5)
    vac = cl.find_vacuum(rep)
    lv = cl.ladder_ops(vac.rep)
    assert np.linalg.norm(lv.cdags[0] @ lv.cdags[0] @ vac.phi) < 1e-14


def test_ladder_even_unsupported():
    with pytest.raises(UnsupportedError):
        cl.ladder_ops(cl.gamma_rep(4))


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_intertwiner_identity_and_random(d, rng):
    rep = cl.gamma_rep(d)
    U = cl.intertwiner(rep, rep)
    assert_allclose(U, np.eye(rep.N), atol=1e-12)
    V = cl.random_unitary(rep.N, rng)
    W = cl.intertwiner(rep, cl.conjugate_rep(rep, V))
    # recovered up to a global phase
    ph = np.vdot(W.ravel(), V.ravel()) / rep.N
    assert_allclose(abs(ph), 1, atol=1e-10)
    assert_allclose(W * ph, V, atol=1e-10)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_intertwiner_rotation(d, rng):
    rep = cl.gamma_rep(d)
    rot = cl.rotate_rep(rep, cl.random_rotation(d, rng))
    U = cl.intertwiner(rep, rot)
    assert cl.intertwiner_residual(rep, rot, U) < 1e-12


@pytest.mark.parametrize("d", [3, 5])
def test_chirality_mismatch(d):
    rep = cl.gamma_rep(d)
    flipped = cl.rep_from_gammas(-np.asarray(rep.gammas))
    assert cl.chirality_sign(flipped) == -cl.chirality_sign(rep)
    with pytest.raises(NoIntertwinerError):
        cl.intertwiner(rep, flipped)


def test_antisym_d2():
    b = 1.7
    can = cl.antisym_canonical([[0, b], [-b, 0]])
    assert_allclose(can.Ds, [b])
    F = cl.spin_field_matrix(cl.gamma_rep(2), [[0, b], [-b, 0]])
    assert_allclose(np.linalg.eigvalsh(F), [-b, b], atol=1e-14)


def test_antisym_d5_block():
    B = cl.block_form([3.0, 1.0], 5)
    P = np.eye(5)[[4, 2, 0, 3, 1]]
    can = cl.antisym_canonical(P @ B @ P.T)
    assert_allclose(can.Ds, [3.0, 1.0])
    assert can.reconstruction_residual(P @ B @ P.T) < 1e-13
    assert_allclose(np.linalg.det(can.R), 1)


def test_antisym_rejects_symmetric():
    with pytest.raises(ValidationError):
        cl.antisym_canonical(np.eye(3))


@given(st.integers(2, 7), st.integers(0, 2**31 - 1))
def test_random_field_spin_bounds(d, seed):
    rng = np.random.default_rng(seed)
    M = rng.standard_normal((d, d))
    B = M - M.T
    can = cl.antisym_canonical(B)
    assert can.reconstruction_residual(B) < 1e-12
    assert_allclose(can.R.T @ can.R, np.eye(d), atol=1e-12)
    rep = cl.gamma_rep(d)
    F = cl.spin_field_matrix(rep, B)
    assert_allclose(np.abs(np.linalg.eigvalsh(F)).max(), can.Ds.sum(), atol=1e-11)
    hs = np.sqrt(np.sum(np.triu(B, 1) ** 2))
    assert can.Ds.sum() <= np.sqrt(d // 2) * hs + 1e-12
    U, Fc, _ = cl.spin_field_canonical(rep, B)
    assert_allclose(U.conj().T @ Fc @ U, F, atol=1e-10)
