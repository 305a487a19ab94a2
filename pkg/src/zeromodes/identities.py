"""Pointwise identity / inequality catalog evaluated on exact jets.

``check_identity(id, d, x, eps, seed)`` returns an :class:`IdentityCheck`
whose ``gap`` is ``max |lhs - rhs|`` for equalities and ``max(0, lhs - rhs)``
for inequalities.  ``check_batch`` runs the same computation vectorized over
many points and is what the property tests use.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import clifford as cl
from . import fields as fl
from .exceptions import UnsupportedError, ValidationError
from .jets import Jet, variables

EQ_TOL = 1e-11
INEQ_TOL = 1e-13


@dataclass
class IdentityCheck:
    id: str
    d: int
    x: np.ndarray
    eps: float
    lhs: np.ndarray
    rhs: np.ndarray
    gap: float
    tol: float
    kind: str = "eq"
    runtime_ms: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.gap <= self.tol)


@dataclass
class BatchResult:
    id: str
    d: int
    lhs: np.ndarray
    rhs: np.ndarray
    gaps: np.ndarray
    tol: float
    kind: str

    @property
    def max_gap(self):
        return float(np.max(self.gaps))

    @property
    def passed(self):
        return bool(self.max_gap <= self.tol)

    @property
    def min_slack(self):
        """``min (rhs - lhs)`` for inequalities."""
        return float(np.min(self.rhs - self.lhs))


# ---------------------------------------------------------------------------
# helpers


def abs_jet(psi: Jet) -> Jet:
    return fl.norm2(psi).sqrt()


def eps_abs(psi: Jet, eps: float) -> Jet:
    """``|psi|_eps = sqrt(|psi|^2 + eps^2)``."""
    return (fl.norm2(psi) + eps * eps).sqrt()


def grad_sq(f: Jet) -> np.ndarray:
    """``|grad f|^2`` for a real scalar jet."""
    return np.sum(f.grad * f.grad, axis=-1)


def grad_inner(a: Jet, b: Jet) -> np.ndarray:
    """``Re sum_j <d_j a, d_j b>`` for spinor jets."""
    return np.real(np.sum(np.conj(a.grad) * b.grad, axis=(-1, -2)))


def covariant(psi: Jet, A: np.ndarray) -> np.ndarray:
    """``(d_j - i A_j) psi`` as an array ``(..., d, N)``."""
    return np.swapaxes(psi.grad, -1, -2) - 1j * A[..., :, None] * psi.val[..., None, :]


def lambda_covariant(rep, psi: Jet, lam: np.ndarray) -> np.ndarray:
    """``(d_j - i lam gamma_j) psi`` as ``(..., d, N)``."""
    gpsi = np.einsum("jab,...b->...ja", rep.gammas, psi.val)
    return np.swapaxes(psi.grad, -1, -2) - 1j * lam[..., None, None] * gpsi


def pi_project(rep, T: np.ndarray) -> np.ndarray:
    """``(Pi T)_j = T_j - (1/d) gamma_j sum_k gamma_k T_k`` for ``T`` of shape ``(..., d, N)``."""
    d = rep.d
    s = np.einsum("kab,...kb->...a", rep.gammas, T)
    return T - np.einsum("jab,...b->...ja", rep.gammas, s) / d


def spin_vector(rep, v: np.ndarray) -> np.ndarray:
    """``<v, gamma v>`` (real vector)."""
    return np.real(np.einsum("...a,jab,...b->...j", np.conj(v), rep.gammas, v))


def _zero_mode_family(d, family=None, seed=0):
    if family is not None:
        return fl.build_family(family, d, seed=seed)
    if d == 3:
        return fl.loss_yau()
    if d % 2 == 1:
        return fl.appendix_a(d)
    raise UnsupportedError(f"no zero-mode family in even dimension d={d}")


def _require(d, allowed, name):
    if d not in allowed:
        raise UnsupportedError(f"{name} is defined for d in {sorted(allowed)}, got {d}")


# ---------------------------------------------------------------------------
# catalog


def _zm(fam, xs):
    fam.check_domain(xs)
    X = variables(xs, order=1)
    psi = fam.psi_fn(X)
    lhs = fl.dirac_apply(fam.rep, psi, fam.A_fn(X))
    return lhs, np.zeros_like(lhs)


def _id_zm_ly(d, xs, eps, seed, family):
    _require(d, {3}, "ZM_LY")
    return _zm(fl.loss_yau(), xs)


def _id_zm_appa(d, xs, eps, seed, family):
    return _zm(fl.appendix_a(d), xs)


def _id_zm_dm(d, xs, eps, seed, family):
    return _zm(fl.dunne_min(d), xs)


def _id_zm_mono(d, xs, eps, seed, family):
    _require(d, {3}, "ZM_MONO")
    return _zm(fl.monopole(0.5), xs)


def _id_lambda_eq(d, xs, eps, seed, family):
    fam = fl.spinor_family(d)
    X = variables(xs, order=1)
    psi = fam.psi_fn(X)
    lhs = fl.dirac_jet(fam.rep, psi).val
    lam = fam.lam_fn(variables(xs, order=0)).val
    return lhs, d * lam[..., None] * psi.val


def _id_spin_id(d, xs, eps, seed, family):
    _require(d, {3}, "SPIN_ID")
    fam = fl.generic_spinor(3, seed)
    psi = fam.psi_fn(variables(xs, order=0)).val
    n = spin_vector(fam.rep, psi) / np.sum(np.abs(psi) ** 2, axis=-1)[..., None]
    lhs = np.einsum("...j,jab,...b->...a", n, fam.rep.gammas, psi)
    return lhs, psi


def _id_squared(d, xs, eps, seed, family):
    _require(d, {3}, "SQUARED")
    fam = fl.loss_yau()
    X = variables(xs, order=2)
    psi = fam.psi_fn(X)
    A = fam.A_fn(X)
    B = fl.curl(A).val
    div = fl.divergence(A).val
    Av = A.val
    lap = np.trace(psi.hess, axis1=-2, axis2=-1)
    adot = np.einsum("...j,...aj->...a", Av, psi.grad)
    sq = (-lap + 1j * div[..., None] * psi.val + 2j * adot
          + np.sum(Av * Av, axis=-1)[..., None] * psi.val)
    sb = np.einsum("...j,jab,...b->...a", B, fam.rep.gammas, psi.val)
    return sq - sb, np.zeros_like(sq)


def _id_selfdual_s(d, xs, eps, seed, family):
    _require(d, {3}, "SELFDUAL_S")
    fam = fl.loss_yau()
    psi = fam.psi_fn(variables(xs, order=1))
    lhs = fl.dirac_jet(fam.rep, psi).val
    return lhs, 3.0 * np.linalg.norm(psi.val, axis=-1)[..., None] * psi.val


def _id_selfdual_f(d, xs, eps, seed, family):
    _require(d, {3}, "SELFDUAL_F")
    fam = fl.loss_yau()
    A = fam.A_fn(variables(xs, order=1))
    lhs = fl.curl(A).val
    return lhs, (4.0 / 3.0) * np.linalg.norm(A.val, axis=-1)[..., None] * A.val


def _id_el_s(d, xs, eps, seed, family):
    _require(d, {3}, "EL_S")
    fam = fl.loss_yau()
    psi = fam.psi_fn(variables(xs, order=2))
    D = fl.dirac_jet(fam.rep, psi)  # order 1
    phi = D * (fl.norm2(D) ** -0.25).expand()
    lhs = fl.dirac_jet(fam.rep, phi).val
    return lhs, 3.0**1.5 * np.linalg.norm(psi.val, axis=-1)[..., None] * psi.val


def _id_el_f(d, xs, eps, seed, family):
    _require(d, {3}, "EL_F")
    fam = fl.loss_yau()
    A = fam.A_fn(variables(xs, order=2))
    B = fl.curl(A)
    C = B * (fl.norm2(B) ** -0.25).expand()
    lhs = fl.curl(C).val
    return lhs, (4.0 / 3.0) ** 1.5 * np.linalg.norm(A.val, axis=-1)[..., None] * A.val


def _id_nonlin(d, xs, eps, seed, family):
    fam = fl.spinor_family(d)
    psi = fam.psi_fn(variables(xs, order=1))
    lhs = fl.dirac_jet(fam.rep, psi).val
    a = np.linalg.norm(psi.val, axis=-1) ** (2.0 / (d - 1))
    return lhs, d * a[..., None] * psi.val


def _id_hls_opt(d, xs, eps, seed, family):
    fam = fl.hls_optimizer(d)
    phi = fam.psi_fn(variables(xs, order=1))
    f = phi * (fl.norm2(phi) ** (-1.0 / (d + 1))).expand()
    lhs = fl.dirac_jet(fam.rep, f).val
    return lhs, d * phi.val


def _id_diamag(d, xs, eps, seed, family):
    fam = _zero_mode_family(d, family, seed)
    fam.check_domain(xs)
    X = variables(xs, order=1)
    psi = fam.psi_fn(X)
    A = fam.A_fn(X).val
    lhs = grad_sq(abs_jet(psi))
    cov = covariant(psi, A)
    rhs = (d - 1) / d * np.sum(np.abs(cov) ** 2, axis=(-1, -2))
    return lhs, rhs


def _id_diamag_lambda(d, xs, eps, seed, family):
    fam = fl.spinor_family(d)
    X = variables(xs, order=1)
    psi = fam.psi_fn(X)
    lam = fam.lam_fn(variables(xs, order=0)).val
    # the lambda equation here is -i gamma.grad psi = d lam psi
    lhs = grad_sq(abs_jet(psi))
    cov = lambda_covariant(fam.rep, psi, lam)
    rhs = (d - 1) / d * np.sum(np.abs(cov) ** 2, axis=(-1, -2))
    return lhs, rhs


def _generic(d, seed, family):
    if family is not None:
        return fl.build_family(family, d, seed=seed)
    return fl.generic_spinor(d, seed)


def _id_sqrt_id(d, xs, eps, seed, family):
    _require(d, {3}, "SQRT_ID")
    _need_eps(eps)
    fam = _generic(3, seed, family)
    psi = fam.psi_fn(variables(xs, order=1))
    pe = eps_abs(psi, eps)
    mod = abs_jet(psi)
    lhs = grad_sq(pe ** 0.5)
    unit = psi * pe.reciprocal().expand()
    n2 = fl.norm2(psi).val
    rhs = (0.5 * (grad_inner(unit, psi) - np.sum(np.abs(psi.grad) ** 2, axis=(-1, -2)) / pe.val)
           + 0.75 * n2 / pe.val**3 * grad_sq(mod))
    return lhs, rhs


def _id_rootgen(d, xs, eps, seed, family):
    _need_eps(eps)
    fam = _generic(d, seed, family)
    psi = fam.psi_fn(variables(xs, order=1))
    a = 2.0 / (d - 1)
    pe = eps_abs(psi, eps)
    scaled = psi * (pe ** (-a)).expand()
    lhs = grad_inner(scaled, psi)
    n2 = fl.norm2(psi).val
    rhs = (np.sum(np.abs(psi.grad) ** 2, axis=(-1, -2)) / pe.val**a
           - a * n2 / pe.val ** (2 + a) * grad_sq(abs_jet(psi)))
    return lhs, rhs


def _id_spin_ortho(d, xs, eps, seed, family):
    _require(d, {3}, "SPIN_ORTHO")
    _need_eps(eps)
    fam = _generic(3, seed, family)
    psi = fam.psi_fn(variables(xs, order=1))
    inv = eps_abs(psi, eps).reciprocal()
    s = 1j * spin_vector(fam.rep, psi.val)
    lhs = np.real(np.sum(inv.grad * s, axis=-1))
    return lhs, np.zeros_like(lhs)


def _id_pi_norm(d, xs, eps, seed, family):
    rep = cl.gamma_rep(d)
    rng = np.random.default_rng(seed)
    n = len(xs)
    alpha = rng.normal(size=(n, d))
    v = rng.normal(size=(n, rep.N)) + 1j * rng.normal(size=(n, rep.N))
    T = alpha[:, :, None] * v[:, None, :]
    P = pi_project(rep, T)
    lhs = np.sum(np.abs(P) ** 2, axis=(-1, -2))
    rhs = (d - 1) / d * np.sum(alpha**2, -1) * np.sum(np.abs(v) ** 2, -1)
    return lhs, rhs


def _id_pi_fix(d, xs, eps, seed, family):
    if family == "GENERIC":
        fam = fl.generic_spinor(d, seed)
        base = _zero_mode_family(d, None, seed)
        A_fn = base.A_fn
    else:
        fam = _zero_mode_family(d, family, seed)
        A_fn = fam.A_fn
    fam.check_domain(xs)
    X = variables(xs, order=1)
    psi = fam.psi_fn(X)
    T = covariant(psi, A_fn(X).val)
    return T, pi_project(fam.rep, T)


def _id_mono_sat(d, xs, eps, seed, family):
    _require(d, {3}, "MONO_SAT")
    fam = fl.monopole(0.5)
    fam.check_domain(xs)
    X = variables(xs, order=2)
    psi = fam.psi_fn(X)
    lhs = grad_sq(fl.norm2(psi) ** 0.25)
    B = fl.curl(fam.A_fn(X)).val
    mod = np.linalg.norm(psi.val, axis=-1)
    s = spin_vector(fam.rep, psi.val) / mod[..., None]
    rhs = 0.5 * np.sum(B * s, axis=-1)
    return lhs, rhs


def _id_mono_ids(d, xs, eps, seed, family):
    _require(d, {3}, "MONO_IDS")
    fam = fl.monopole(0.5)
    fam.check_domain(xs)
    X = variables(xs, order=2)
    psi = fam.psi_fn(X).val
    r = np.linalg.norm(xs, axis=-1)
    sx = np.einsum("...j,jab,...b->...a", xs, fam.rep.gammas, psi)
    B = fl.curl(fam.A_fn(X)).val
    g = fam.params["g"]
    lhs = np.concatenate([sx, np.sum(np.abs(psi) ** 2, -1)[..., None], B], axis=-1)
    rhs = np.concatenate([r[..., None] * psi, (1 / r**2)[..., None],
                          g * xs / r[..., None] ** 3], axis=-1)
    return lhs, rhs


def _id_sob_eq(d, xs, eps, seed, family):
    _require(d, {3}, "SOB_EQ")
    r = np.linalg.norm(xs, axis=-1)
    if np.any(r == 0):
        raise ValidationError("SOB_EQ needs x != 0")
    X = variables(xs, order=2)
    f = (X * X).sum() ** -0.25
    lhs = -f.laplacian()
    return lhs, 0.25 * r**-2.5


def _need_eps(eps):
    if not eps > 0:
        raise ValidationError("this identity needs eps > 0")


# id -> (function, kind, dims)
CATALOG = {
    "ZM_LY": (_id_zm_ly, "eq", (3,)),
    "ZM_APPA": (_id_zm_appa, "eq", (3, 5, 7, 9)),
    "ZM_DM": (_id_zm_dm, "eq", (3, 5, 7, 9)),
    "ZM_MONO": (_id_zm_mono, "eq", (3,)),
    "LAMBDA_EQ": (_id_lambda_eq, "eq", (3, 4, 5, 6, 7)),
    "SPIN_ID": (_id_spin_id, "eq", (3,)),
    "SQUARED": (_id_squared, "eq", (3,)),
    "SELFDUAL_S": (_id_selfdual_s, "eq", (3,)),
    "SELFDUAL_F": (_id_selfdual_f, "eq", (3,)),
    "EL_S": (_id_el_s, "eq", (3,)),
    "EL_F": (_id_el_f, "eq", (3,)),
    "NONLIN": (_id_nonlin, "eq", (3, 4, 5, 6, 7)),
    "HLS_OPT": (_id_hls_opt, "eq", (3, 4, 5, 6, 7)),
    "DIAMAG": (_id_diamag, "le", (3, 5, 7)),
    "DIAMAG_LAMBDA": (_id_diamag_lambda, "le", (3, 4, 5, 6, 7)),
    "SQRT_ID": (_id_sqrt_id, "eq", (3,)),
    "ROOTGEN_ID": (_id_rootgen, "eq", (3, 4, 5, 6, 7)),
    "SPIN_ORTHO": (_id_spin_ortho, "eq", (3,)),
    "PI_NORM": (_id_pi_norm, "eq", (3, 4, 5, 6, 7)),
    "PI_FIX": (_id_pi_fix, "eq", (3, 5, 7)),
    "MONO_SAT": (_id_mono_sat, "eq", (3,)),
    "MONO_IDS": (_id_mono_ids, "eq", (3,)),
    "SOB_EQ": (_id_sob_eq, "eq", (3,)),
}

NEEDS_EPS = {"SQRT_ID", "ROOTGEN_ID", "SPIN_ORTHO"}
MONOPOLE_IDS = {"ZM_MONO", "MONO_SAT", "MONO_IDS"}


def _gaps(lhs, rhs, kind):
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    if kind == "le":
        return np.maximum(0.0, lhs - rhs)
    diff = np.abs(lhs - rhs)
    n = len(lhs) if lhs.ndim else 1
    return diff.reshape(n, -1).max(axis=1) if lhs.ndim > 1 else diff.reshape(n)


def check_batch(id: str, d: int, xs, eps: float = 0.0, seed: int = 0,
                family: str | None = None) -> BatchResult:
    key = id.upper()
    if key not in CATALOG:
        raise ValidationError(f"unknown identity {id!r}; known: {', '.join(CATALOG)}")
    fn, kind, _ = CATALOG[key]
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    if xs.shape[-1] != d and key != "PI_NORM":
        raise ValidationError(f"points have {xs.shape[-1]} coordinates, d={d}")
    lhs, rhs = fn(d, xs, eps, seed, family)
    gaps = _gaps(lhs, rhs, kind)
    tol = EQ_TOL if kind == "eq" else INEQ_TOL
    return BatchResult(key, d, np.asarray(lhs), np.asarray(rhs), gaps, tol, kind)


def check_identity(id: str, d: int, x=None, eps: float = 0.0, seed: int = 0,
                   family: str | None = None) -> IdentityCheck:
    """Evaluate one catalog entry at one point (deterministic in all arguments).

    If ``x`` is None a point is drawn from ``seed``.
    """
    t0 = time.perf_counter()
    if x is None:
        fam = "MONOPOLE" if id.upper() in MONOPOLE_IDS else None
        x = fl.sample_points(1, d, seed, family=fam)[0]
    x = np.asarray(x, dtype=float)
    res = check_batch(id, d, x[None], eps, seed, family)
    dt = (time.perf_counter() - t0) * 1e3
    return IdentityCheck(res.id, d, x, eps, res.lhs[0], res.rhs[0], float(res.gaps[0]),
                         res.tol, res.kind, dt)
