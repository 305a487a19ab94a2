"""Verification suites emitting :class:`CheckReport` rows."""

from __future__ import annotations

import time

import numpy as np

from . import clifford as cl
from . import fields as fl
from . import identities as ids
from . import integralops as io_
from . import norms
from .exceptions import ValidationError
from .report import CheckReport

SUITES = ("identities", "appendix", "integrals")

EPS = 0.1          # regularization for the |psi|_eps identities
INEQ_FACTOR = 4    # inequalities are sampled at 4x the equality sample count


class _Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *a):
        self.ms = int(round((time.perf_counter() - self.t0) * 1e3))


def _row(id, d, inputs, lhs, rhs, gap, tol, ms, debug=None):
    return CheckReport(id, d, inputs, float(lhs), float(rhs), float(gap), float(tol), ms,
                       debug or {})


def identity_suite(d: int = 3, samples: int = 64, seed: int = 42, tol=None):
    rng = np.random.default_rng(seed)
    rows = []
    for key, (_, kind, dims) in ids.CATALOG.items():
        if d not in dims:
            continue
        s = int(rng.integers(2 ** 31))
        n = samples * (INEQ_FACTOR if kind == "le" else 1)
        fam = "MONOPOLE" if key in ids.MONOPOLE_IDS else None
        xs = fl.sample_points(n, d, s, family=fam)
        eps = EPS if key in ids.NEEDS_EPS else 0.0
        with _Timer() as tm:
            res = ids.check_batch(key, d, xs, eps=eps, seed=s)
        t = res.tol if tol is None else tol
        i = int(np.argmax(res.gaps))
        lhs, rhs = np.ravel(res.lhs[i]), np.ravel(res.rhs[i])
        rows.append(_row(f"{key}/d{d}", d, {"samples": n, "seed": s, "eps": eps, "kind": kind},
                         np.linalg.norm(lhs), np.linalg.norm(rhs), res.max_gap, t, tm.ms,
                         {"worst_point": xs[i], "lhs": lhs, "rhs": rhs}))
    return rows


def appendix_suite(d: int = 5, samples: int = 100, seed: int = 42, tol=None, n_fields: int = 200):
    if not 2 <= d <= cl.MAX_DIM:
        raise ValidationError(f"d must be in 2..{cl.MAX_DIM}")
    rng = np.random.default_rng(seed)
    rows = []

    def add(id, lhs, rhs, gap, t, ms, inputs=None, debug=None):
        rows.append(_row(f"{id}/d{d}", d, inputs or {}, lhs, rhs, gap, t if tol is None else tol,
                         ms, debug))

    with _Timer() as tm:
        rep = cl.gamma_rep(d)
        r = max(rep.anticommutator_residual(), rep.hermiticity_residual())
    add("CLIFFORD", r, 0, r, 1e-14, tm.ms)
    if d % 2 == 1:
        with _Timer() as tm:
            lad = cl.ladder_ops(rep)
            r = lad.car_residual()
        add("CAR", r, 0, r, 1e-14, tm.ms)
        with _Timer() as tm:
            vac = cl.find_vacuum(rep, lad)
            lad_v = cl.ladder_ops(vac.rep)
            r = max([np.linalg.norm(c @ vac.phi) for c in lad_v.cs] + [0.0])
            r = max(r, abs(np.linalg.norm(vac.phi) - 1))
        add("VACUUM", r, 0, r, 1e-13, tm.ms)
        with _Timer() as tm:
            F = cl.fock_basis(lad_v, vac)
            r = np.abs(F.conj() @ F.T - np.eye(len(F))).max()
        add("FOCK_ONB", r, 0, r, 1e-13, tm.ms)
        with _Timer() as tm:
            om = cl.omega_matrix(vac.rep, vac).omega
            r = np.abs(om - cl.canonical_omega(d)).max()
        add("OMEGA_BLOCK", r, 0, r, 1e-13, tm.ms, debug={"omega": om})
        if d <= 9:
            s = int(rng.integers(2 ** 31))
            with _Timer() as tm:
                fam = fl.appendix_a(d)
                xs = fl.sample_points(samples, d, s)
                U = fam.params["U"](fl.variables(xs, order=0)).val
                u2 = np.sum(U * U, axis=-1)
                r = np.abs(u2 - 1).max()
            add("U_UNIT", u2[np.argmax(np.abs(u2 - 1))], 1, r, 1e-12, tm.ms,
                {"samples": samples, "seed": s})
    with _Timer() as tm:
        V = cl.random_unitary(rep.N, rng)
        repB = cl.conjugate_rep(rep, V)
        U = cl.intertwiner(rep, repB)
        r1 = cl.intertwiner_residual(rep, repB, U)
        r2 = np.abs(U.conj().T @ U - np.eye(rep.N)).max()
    add("INTERTWINER", r1, 0, r1, 1e-12, tm.ms)
    add("INTERTWINER_UNITARY", r2, 0, r2, 1e-13, tm.ms)

    nu = d // 2
    rec = opn = cs = spin = 0.0
    with _Timer() as tm:
        for _ in range(n_fields):
            M = rng.standard_normal((d, d))
            B = M - M.T
            can = cl.antisym_canonical(B)
            rec = max(rec, can.reconstruction_residual(B))
            FB = cl.spin_field_matrix(rep, B)
            op = np.abs(np.linalg.eigvalsh(FB)).max()
            opn = max(opn, abs(op - can.Ds.sum()))
            hs = np.sqrt(np.sum(np.triu(B, 1) ** 2))
            cs = max(cs, can.Ds.sum() - np.sqrt(nu) * np.sqrt(np.sum(can.Ds ** 2)))
            psi = rng.standard_normal(rep.N) + 1j * rng.standard_normal(rep.N)
            spin = max(spin, abs(np.vdot(psi, FB @ psi)) - np.sqrt(nu) * np.vdot(psi, psi).real * hs)
    inp = {"fields": n_fields}
    add("ANTISYM_RECON", rec, 0, rec, 1e-12, tm.ms, inp)
    add("FB_OPNORM", opn, 0, opn, 1e-11, tm.ms, inp)
    add("NU_CHAIN", cs, 0, max(cs, 0.0), 1e-13, tm.ms, inp)
    add("NU_BOUND", spin, 0, max(spin, 0.0), 1e-12, tm.ms, inp)
    return rows


BS_POINTS = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.5, 0.5, 0.5],
                      [-1.0, 2.0, 0.5], [0.3, -0.7, 1.5]])
GREEN_POINTS = np.array([[0.0, 0.0, 0.0], [0.6, -0.4, 0.8]])


def integral_suite(seed: int = 42, tol=None, spec: io_.SingularQuadSpec | None = None):
    """Biot--Savart against both closed forms, Green fixed point, by-parts and gauge checks.

    Every input is fixed; ``seed`` is accepted for a uniform suite signature.
    """
    fam = fl.loss_yau()
    w = fam.params["w_unit"]
    rows = []

    def add(id, lhs, rhs, gap, t, ms, inputs=None, debug=None):
        rows.append(_row(id, 3, inputs or {}, lhs, rhs, gap, t if tol is None else tol, ms, debug))

    for x in BS_POINTS:
        with _Timer() as tm:
            A = io_.biot_savart(fam, x, spec)
        ly = fl.loss_yau_A_closed(x, w)
        co = fl.loss_yau_coulomb_A(x, w)
        inp = {"x": x, "quad_error": A.error}
        add("BS_VS_LY", np.linalg.norm(A.value), np.linalg.norm(ly),
            np.linalg.norm(A.value - ly), 1e-3, tm.ms, inp, {"A_bs": A.value, "A_ly": ly})
        add("BS_VS_COULOMB", np.linalg.norm(A.value), np.linalg.norm(co),
            np.linalg.norm(A.value - co), 1e-3, 0, inp)

    with _Timer() as tm:
        aud = io_.curl_div_audit(lambda p: io_.biot_savart(fam, p, spec).value, BS_POINTS[2],
                                 h=5e-3, B=lambda p: fl.loss_yau_B_closed(p, w))
    add("BS_CURL", aud.curl_residual, 0, aud.curl_residual, 1e-3, tm.ms, {"x": BS_POINTS[2]})
    add("BS_DIV", aud.div, 0, aud.div, 1e-3, tm.ms, {"x": BS_POINTS[2]})

    src = io_.zero_mode_source(fam)
    for x in GREEN_POINTS:
        with _Timer() as tm:
            g = io_.dirac_green_convolve(src, x, spec)
        psi = fl.eval_family(fam, "psi", x, order=0).val
        r = np.linalg.norm(g.value - psi) / np.linalg.norm(psi)
        add("GREEN_FIXED_POINT", np.linalg.norm(g.value), np.linalg.norm(psi), r, 2e-3, tm.ms,
            {"x": x})

    with _Timer() as tm:
        eta = norms.bump_spinor(fam.params["phi0"], radius=2.0)
        bp = norms.integral_byparts_check(fam.psi_fn, eta, fam.A_fn, fam.rep, box=2.05, order=24)
    add("BYPARTS", abs(bp.lhs), abs(bp.rhs), bp.gap, 1e-6, tm.ms, {"order": 24, "box": 2.05})

    mono = fl.monopole()
    x = np.array([0.7, -0.4, 0.9])
    with _Timer() as tm:
        r = io_.gauge_difference_check(io_.family_vector(mono, "A"),
                                       io_.family_vector(mono, "A_prime"), x)
    add("GAUGE_DIFF", r, 0, r, 1e-8, tm.ms, {"x": x})

    with _Timer() as tm:
        worst = max(e.err for e in norms.green_radial_integrals())
    add("RADIAL_BETA", worst, 0, worst, 1e-10, tm.ms)
    return rows


def run_suite(name: str, d: int = 3, samples: int = 64, seed: int = 42, tol=None):
    if name == "identities":
        return identity_suite(d, samples, seed, tol)
    if name == "appendix":
        return appendix_suite(d, samples, seed, tol)
    if name == "integrals":
        return integral_suite(seed, tol)
    raise ValidationError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
