"""Closed-form spinor / potential families with exact second-order derivatives.

Every family is evaluated on a coordinate :class:`~zeromodes.jets.Jet`, so the
returned objects carry analytic first and second partials.  Points may be a
single vector of shape ``(d,)`` or a batch ``(n, d)``.

Conventions
-----------
* The Pauli matrices are the standard ones; ``gamma_rep(3)`` is exactly
  ``(sigma_1, sigma_2, sigma_3)``.
* For the Loss--Yau potential the rotational part is ``2 w x x``, i.e.
  ``2 * np.cross(w, x)``.  This is the sign for which
  ``sigma . (-i grad - A) psi = 0`` holds with right-handed Pauli matrices and
  it coincides with the d = 3 case of the vacuum-based field ``2 omega x``.
* The Dunne--Min potential is implemented literally, with
  ``J = diag(i sigma_2, ..., i sigma_2, -i sigma_2)``; it is a zero mode of a
  relabeled (signed permutation) gamma representation, which the family
  carries together with the intertwiner back to ``gamma_rep(d)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import clifford as cl
from .exceptions import DomainError, UnsupportedError, ValidationError
from .jets import Jet, stack, variables


# ---------------------------------------------------------------------------
# small jet helpers


def norm2(j: Jet) -> Jet:
    """``sum |v_k|^2`` over the last axis, as a real jet."""
    return (j.conj() * j).sum().real


def cross_matrix(w) -> np.ndarray:
    """Matrix ``W`` with ``W @ x = w x x``."""
    w1, w2, w3 = w
    return np.array([[0.0, -w3, w2], [w3, 0.0, -w1], [-w2, w1, 0.0]])


def dirac_jet(rep: cl.CliffordRep, psi: Jet) -> Jet:
    """Jet of ``-i gamma . grad psi`` (one derivative order lower than ``psi``)."""
    out = None
    for j, g in enumerate(rep.gammas):
        t = psi.partial(j).matvec(g)
        out = t if out is None else out + t
    return out * (-1j)


def slash_jet(rep: cl.CliffordRep, v: Jet, psi: Jet) -> Jet:
    """Jet of ``(gamma . v) psi`` for a vector jet ``v``."""
    out = None
    for j, g in enumerate(rep.gammas):
        t = v.comp(j).expand() * psi.matvec(g)
        out = t if out is None else out + t
    return out


def field_strength(A: Jet) -> Jet:
    """``F_jk = d_j A_k - d_k A_j`` with value shape ``(..., d, d)``."""
    d = A.dim
    rows = []
    for k in range(d):
        col = []
        for j in range(d):
            if j == k:
                col.append(A.comp(0).partial(0) * 0.0)
            else:
                col.append(A.comp(k).partial(j) - A.comp(j).partial(k))
        rows.append(stack(col))
    return stack(rows)


def curl(A: Jet) -> Jet:
    """Three-dimensional curl of a vector jet."""
    if A.dim != 3:
        raise UnsupportedError("curl is defined here for d = 3 only")
    c = [A.comp(2).partial(1) - A.comp(1).partial(2),
         A.comp(0).partial(2) - A.comp(2).partial(0),
         A.comp(1).partial(0) - A.comp(0).partial(1)]
    return stack(c)


def divergence(A: Jet) -> Jet:
    out = None
    for j in range(A.dim):
        t = A.comp(j).partial(j)
        out = t if out is None else out + t
    return out


def field_norm(F) -> np.ndarray:
    """``|B| = (sum_{j<k} F_jk^2)^{1/2}`` for a field-strength array ``(..., d, d)``."""
    F = np.asarray(F)
    return np.sqrt(0.5 * np.sum(F * F, axis=(-1, -2)))


# ---------------------------------------------------------------------------
# families


@dataclass(frozen=True, eq=False)
class FieldFamily:
    id: str
    d: int
    rep: cl.CliffordRep
    psi_fn: Callable[[Jet], Jet]
    A_fn: Callable[[Jet], Jet] | None = None
    lam_fn: Callable[[Jet], Jet] | None = None
    domain_fn: Callable[[np.ndarray], None] | None = None
    params: dict = field(default_factory=dict)

    @property
    def name(self):
        if self.id in ("LOSS_YAU",):
            return self.id
        if self.id == "MONOPOLE":
            return f"MONOPOLE({self.params['g']:g})"
        return f"{self.id}({self.d})"

    def check_domain(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.d:
            raise ValidationError(f"{self.name} lives in d={self.d}, point has {x.shape[-1]} coordinates")
        if self.domain_fn is not None:
            self.domain_fn(x)


def _lam(X: Jet) -> Jet:
    return 1.0 / (1.0 + (X * X).sum())


def _spinor_core(rep, Phi0, power):
    """``x -> (1 + i gamma . x) (1+|x|^2)^(-power) Phi0``."""
    Phi0 = np.asarray(Phi0, dtype=complex)
    G = np.stack([g @ Phi0 for g in rep.gammas], axis=-1)  # N x d, column k = gamma_k Phi0

    def psi(X):
        lam = _lam(X)
        top = X.matvec(1j * G) + Phi0
        return (lam ** power).expand() * top

    return psi


def _unit(v, what="spinor"):
    v = np.asarray(v, dtype=complex)
    n = np.linalg.norm(v)
    if not n > 0:
        raise ValidationError(f"{what} must be nonzero")
    return v


def loss_yau(phi0=None) -> FieldFamily:
    """The three-dimensional pair ``psi = (1 + i sigma.x) phi0 / (1+r^2)^{3/2}``.

    ``phi0`` defaults to the vacuum of ``gamma_rep(3)``, giving ``w = e_1``.
    The potential is built from the unit direction ``w / |phi0|^2`` so the pair
    is a zero mode for any nonzero ``phi0``.
    """
    rep = cl.gamma_rep(3)
    if phi0 is None:
        phi0 = cl.find_vacuum(rep).phi
    phi0 = _unit(phi0)
    if phi0.shape != (2,):
        raise ValidationError("phi0 must be a 2-spinor")
    w = np.real(np.einsum("i,kij,j->k", phi0.conj(), rep.gammas, phi0))
    what = w / np.vdot(phi0, phi0).real
    W = cross_matrix(what)
    psi = _spinor_core(rep, phi0, 1.5)

    def A(X):
        lam = _lam(X)
        r2 = (X * X).sum()
        xw = (X * what).sum()
        inner = (1.0 - r2).expand() * what + 2.0 * xw.expand() * X + 2.0 * X.matvec(W)
        return (3.0 * lam * lam).expand() * inner

    return FieldFamily("LOSS_YAU", 3, rep, psi, A, _lam, None,
                       {"phi0": phi0, "w": w, "w_unit": what})


def loss_yau_B_closed(x, w):
    """Closed-form ``B = 12 / (1+r^2)^3 ((1-r^2) w + 2 (x.w) x + 2 w x x)`` (numpy values)."""
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    r2 = np.sum(x * x, axis=-1)[..., None]
    xw = np.sum(x * w, axis=-1)[..., None]
    return 12.0 / (1 + r2) ** 3 * ((1 - r2) * w + 2 * xw * x + 2 * np.cross(w, x))


def loss_yau_A_closed(x, w):
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    r2 = np.sum(x * x, axis=-1)[..., None]
    xw = np.sum(x * w, axis=-1)[..., None]
    return 3.0 / (1 + r2) ** 2 * ((1 - r2) * w + 2 * xw * x + 2 * np.cross(w, x))


def _coulomb_h(r):
    """``h(r) = 3 (arctan r - r) / r^3`` and ``h'(r) / r``, series near 0."""
    r = np.asarray(r, dtype=float)
    small = r < 1e-2
    rs = np.where(small, 1.0, r)
    h = 3.0 * (np.arctan(rs) - rs) / rs**3
    hp_r = -3.0 / (rs**2 * (1 + rs**2)) - 9.0 * (np.arctan(rs) - rs) / rs**5
    t = r * r
    h_ser = 3.0 * (-1 / 3 + t / 5 - t**2 / 7 + t**3 / 9 - t**4 / 11)
    hp_ser = 3.0 * (2 / 5 - 4 * t / 7 + 6 * t**2 / 9 - 8 * t**3 / 11)
    return np.where(small, h_ser, h), np.where(small, hp_ser, hp_r)


def loss_yau_coulomb_A(x, w):
    """Divergence-free gauge of the Loss--Yau potential.

    ``A_C = A - grad chi`` with ``chi = (x.w) h(|x|)``.  Same curl as ``A``,
    ``div A_C = 0`` and ``A_C = O(|x|^-2)``, so it is the potential returned
    by the Biot--Savart integral of ``B``.
    """
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    r = np.sqrt(np.sum(x * x, axis=-1))
    h, hp_r = _coulomb_h(r)
    xw = np.sum(x * w, axis=-1)
    grad_chi = h[..., None] * w + (xw * hp_r)[..., None] * x
    return loss_yau_A_closed(x, w) - grad_chi


def appendix_a(d: int) -> FieldFamily:
    """Odd-dimensional zero mode ``psi = (1 + i gamma.x)(1+r^2)^{-d/2} |0>``, ``A = d U / (1+r^2)``."""
    if d % 2 == 0:
        raise UnsupportedError("the vacuum-based construction needs odd d")
    if not 3 <= d <= 9:
        raise UnsupportedError("APPENDIX_A is provided for 3 <= d <= 9")
    rep0 = cl.gamma_rep(d)
    vac = cl.find_vacuum(rep0)
    rep = vac.rep
    om = cl.omega_matrix(rep, vac).omega
    e1 = np.zeros(d)
    e1[0] = 1.0
    psi = _spinor_core(rep, vac.phi, d / 2)

    def U(X):
        lam = _lam(X)
        r2 = (X * X).sum()
        inner = (1.0 - r2).expand() * e1 + 2.0 * X.comp(0).expand() * X + 2.0 * X.matvec(om)
        return lam.expand() * inner

    def A(X):
        return (d * _lam(X)).expand() * U(X)

    return FieldFamily("APPENDIX_A", d, rep, psi, A, _lam, None,
                       {"phi": vac.phi, "omega": om, "U": U})


def spinor_family(d: int, Phi0=None, power=None) -> FieldFamily:
    """``psi = (1 + i gamma.x)(1+r^2)^{-power} Phi0`` in any ``d >= 3`` (``power`` defaults to ``d/2``).

    With the default power, ``-i gamma.grad psi = d/(1+r^2) psi``.  ``Phi0``
    defaults to the vacuum for odd ``d`` and to the first basis vector for even
    ``d``; it is normalized so ``|Phi0| = 1``.
    """
    if d < 3:
        raise UnsupportedError("spinor family needs d >= 3")
    rep = cl.gamma_rep(d)
    if Phi0 is None:
        if d % 2:
            vac = cl.find_vacuum(rep)
            rep, Phi0 = vac.rep, vac.phi
        else:
            Phi0 = np.eye(rep.N, dtype=complex)[0]
    Phi0 = _unit(Phi0)
    Phi0 = Phi0 / np.linalg.norm(Phi0)
    p = d / 2 if power is None else power
    return FieldFamily("SPINOR_D", d, rep, _spinor_core(rep, Phi0, p), None, _lam, None,
                       {"Phi0": Phi0, "power": p})


def hls_optimizer(d: int, Phi0=None) -> FieldFamily:
    """``phi = (1 + i gamma.x)(1+r^2)^{-(d+2)/2} |0>``."""
    fam = spinor_family(d, Phi0, power=(d + 2) / 2)
    return FieldFamily("HLS_D", d, fam.rep, fam.psi_fn, None, None, None, fam.params)


def generic_spinor(d: int, seed: int = 0) -> FieldFamily:
    """A smooth spinor that solves no first-order equation (negative control).

    Spinor-family profile plus a seeded Gaussian bump with a linear phase.
    """
    base = spinor_family(d)
    rng = np.random.default_rng(seed)
    N = base.rep.N
    a = rng.uniform(-1, 1, d)
    b = rng.normal(size=d)
    u = rng.normal(size=N) + 1j * rng.normal(size=N)
    v = rng.normal(size=N) + 1j * rng.normal(size=N)

    def psi(X):
        Y = X - a
        bump = (-0.5 * (Y * Y).sum()).exp()
        lin = (X * b).sum()
        extra = bump.expand() * (lin.expand() * (1j * u) + v)
        return base.psi_fn(X) + 0.5 * extra

    return FieldFamily("GENERIC", d, base.rep, psi, None, None, None, {"seed": seed})


def dunne_min_relabeling(d: int):
    """Signed permutation ``Q`` with ``Q e_1 = e_d`` and ``Q omega Q^T = -J`` (``J`` padded with a zero row/column).

    Coordinate ``1`` goes to ``d``; the pair ``(2j, 2j+1)`` goes to
    ``(2j-1, 2j)``, with a sign on the last pair to match the ``-i sigma_2``
    block of ``J``.  ``det Q = -1``.
    """
    if d % 2 == 0:
        raise UnsupportedError("Dunne-Min fields are defined for odd d")
    nu = d // 2
    Q = np.zeros((d, d))
    Q[d - 1, 0] = 1.0
    for j in range(1, nu + 1):
        s = -1.0 if j == nu else 1.0
        Q[2 * j - 2, 2 * j - 1] = s  # e_{2j} -> s e_{2j-1}
        Q[2 * j - 1, 2 * j] = 1.0  # e_{2j+1} -> e_{2j}
    return Q


def dunne_min_J(d: int) -> np.ndarray:
    """``J = diag(i sigma_2, ..., i sigma_2, -i sigma_2)`` on the first ``d-1`` axes, zero row/column ``d``."""
    nu = d // 2
    J = np.zeros((d, d))
    for j in range(nu):
        s = -1.0 if j == nu - 1 else 1.0
        J[2 * j, 2 * j + 1] = s
        J[2 * j + 1, 2 * j] = -s
    return J


def dunne_min(d: int) -> FieldFamily:
    """Literal Dunne--Min potential with its zero-mode spinor in the relabeled representation.

    ``rep`` is ``gamma'_j = sum_k Q_jk gamma_k`` built from the vacuum-based
    representation; ``params['U']`` intertwines ``-gamma'`` (same chirality as
    the base) with ``params['base_rep']`` so that ``U psi`` is a zero mode for
    the base representation.
    """
    app = appendix_a(d)
    Q = dunne_min_relabeling(d)
    J = dunne_min_J(d)
    rep = cl.rotate_rep(app.rep, Q)
    flipped = cl.rep_from_gammas(-np.asarray(rep.gammas))
    match = flipped if cl.chirality_sign(flipped) == cl.chirality_sign(app.rep) else rep
    Uint = cl.intertwiner(app.rep, match)
    psi = _spinor_core(rep, app.params["phi"], d / 2)

    def A(X):
        lam = _lam(X)
        r2 = (X * X).sum()
        xd = X.comp(d - 1)
        ed = np.zeros(d)
        ed[-1] = 1.0
        mask = 1.0 - ed
        # rows i < d: -2 (J x)_i + 2 x_i x_d ; row d: 1 - r^2 + 2 x_d^2
        body = (-2.0 * X.matvec(J) + 2.0 * xd.expand() * X) * mask
        last = (1.0 - r2 + 2.0 * xd * xd).expand() * ed
        return (d * lam * lam).expand() * (body + last)

    def base_psi(X):
        return psi(X).matvec(Uint)

    return FieldFamily("DUNNE_MIN", d, rep, psi, A, _lam, None,
                       {"Q": Q, "J": J, "U": Uint, "base_rep": app.rep,
                        "sign": -1 if match is flipped else 1,
                        "base_psi": base_psi, "appendix": app})


def _monopole_domain(x):
    x = np.asarray(x, dtype=float)
    r = np.sqrt(np.sum(x * x, axis=-1))
    bad = (r + x[..., 2]) <= 1e-12 * np.maximum(r, 1e-300)
    if np.any(bad):
        raise DomainError("monopole fields are singular on the half-line {x=y=0, z<=0} "
                          "(including the origin)")


def monopole(g: float = 0.5) -> FieldFamily:
    """Monopole potential ``A = g (-y, x, 0) / (r (r+z))`` and the spinor with ``sigma.x psi = r psi``.

    The spinor is a zero mode only for ``g = 1/2``.  ``params['A_prime']``
    is the potential with its string on the positive z-axis.
    """
    rep = cl.gamma_rep(3)

    def _r(X):
        return (X * X).sum().sqrt()

    def psi(X):
        r = _r(X)
        s = (r + X.comp(2)).sqrt()
        pre = (r ** 1.5 * np.sqrt(2.0)).reciprocal()
        up = pre * s
        dn = pre * (X.comp(0) + 1j * X.comp(1)) / s
        return stack([up, dn])

    def rot(X):
        return stack([-1.0 * X.comp(1), X.comp(0), 0.0 * X.comp(2)])

    def A(X):
        r = _r(X)
        return (g / (r * (r + X.comp(2)))).expand() * rot(X)

    def A_prime(X):
        r = _r(X)
        return (-g / (r * (r - X.comp(2)))).expand() * rot(X)

    return FieldFamily("MONOPOLE", 3, rep, psi, A, None, _monopole_domain,
                       {"g": g, "A_prime": A_prime})


def build_family(name: str, d: int | None = None, **kw) -> FieldFamily:
    """Factory by catalog name: LOSS_YAU, APPENDIX_A, DUNNE_MIN, MONOPOLE, SPINOR_D, HLS_D, GENERIC."""
    key = name.upper()
    if key == "LOSS_YAU":
        return loss_yau(kw.get("phi0"))
    if key == "APPENDIX_A":
        return appendix_a(d)
    if key == "DUNNE_MIN":
        return dunne_min(d)
    if key == "MONOPOLE":
        return monopole(kw.get("g", 0.5))
    if key == "SPINOR_D":
        return spinor_family(d, kw.get("Phi0"))
    if key == "HLS_D":
        return hls_optimizer(d, kw.get("Phi0"))
    if key == "GENERIC":
        return generic_spinor(d, kw.get("seed", 0))
    raise ValidationError(f"unknown family {name!r}")


# ---------------------------------------------------------------------------
# evaluation


def eval_family(family: FieldFamily, which: str, x, order: int = 2) -> Jet:
    """Evaluate ``psi``, ``A``, ``A_prime``, ``B`` (field strength ``F_jk``), ``curlA`` or ``lambda`` at ``x``."""
    family.check_domain(x)
    X = variables(x, order=order)
    if which == "psi":
        return family.psi_fn(X)
    if which in ("A", "B", "curlA"):
        if family.A_fn is None:
            raise UnsupportedError(f"{family.name} carries no vector potential")
        if which == "A":
            return family.A_fn(X)
        if order < 1:
            raise ValidationError("field strength needs derivative order >= 1")
        A = family.A_fn(X)
        return field_strength(A) if which == "B" else curl(A)
    if which == "A_prime":
        fn = family.params.get("A_prime")
        if fn is None:
            raise UnsupportedError(f"{family.name} has no alternate gauge")
        return fn(X)
    if which == "lambda":
        if family.lam_fn is None:
            raise UnsupportedError(f"{family.name} has no scalar lambda")
        return family.lam_fn(X)
    raise ValidationError(f"unknown field {which!r}")


def dirac_apply(rep: cl.CliffordRep, psi: Jet, A: Jet | None = None,
                lam: Jet | None = None) -> np.ndarray:
    """``gamma.(-i grad - A) psi`` at the jet's points, or ``-i gamma.grad psi - d lam psi`` in the lambda form."""
    if psi.dim != rep.d or psi.shape[-1] != rep.N:
        raise ValidationError("spinor jet does not match the representation")
    D = dirac_jet(rep, psi).val
    if A is not None and lam is not None:
        raise ValidationError("give either A or lambda, not both")
    if A is not None:
        Av = np.asarray(A.val if isinstance(A, Jet) else A)
        D = D - np.einsum("...j,jab,...b->...a", Av, rep.gammas, psi.val)
    elif lam is not None:
        lv = np.asarray(lam.val if isinstance(lam, Jet) else lam)
        D = D - rep.d * lv[..., None] * psi.val
    return D


def zero_mode_residual(family: FieldFamily, x) -> np.ndarray:
    """Pointwise ``|gamma.(-i grad - A) psi|`` for a family carrying ``A``."""
    X = variables(np.asarray(x, dtype=float), order=1)
    family.check_domain(x)
    D = dirac_apply(family.rep, family.psi_fn(X), family.A_fn(X))
    return np.linalg.norm(D, axis=-1)


@dataclass
class FDAudit:
    grad_dev: float
    hess_dev: float

    @property
    def max_dev(self):
        return max(self.grad_dev, self.hess_dev)


def finite_difference_audit(family: FieldFamily, which: str, x, h: float = 1e-4) -> FDAudit:
    """Compare jet derivatives with central differences of the jet values."""
    x = np.asarray(x, dtype=float)
    d = family.d
    E = np.eye(d) * h
    pts = [x]
    for j in range(d):
        pts += [x + E[j], x - E[j]]
    for j in range(d):
        for k in range(d):
            pts += [x + E[j] + E[k], x + E[j] - E[k], x - E[j] + E[k], x - E[j] - E[k]]
    pts = np.array(pts)
    family.check_domain(pts)
    vals = eval_family(family, which, pts, order=0).val
    jet = eval_family(family, which, x, order=2)
    gdev = 0.0
    for j in range(d):
        fd = (vals[1 + 2 * j] - vals[2 + 2 * j]) / (2 * h)
        gdev = max(gdev, np.abs(fd - jet.grad[..., j]).max())
    hdev = 0.0
    base = 1 + 2 * d
    for j in range(d):
        for k in range(d):
            i = base + 4 * (j * d + k)
            fd = (vals[i] - vals[i + 1] - vals[i + 2] + vals[i + 3]) / (4 * h * h)
            hdev = max(hdev, np.abs(fd - jet.hess[..., j, k]).max())
    return FDAudit(float(gdev), float(hdev))


def sample_points(n: int, d: int, seed: int = 0, radius: float = 5.0,
                  family: str | None = None) -> np.ndarray:
    """Uniform points in the ball ``|x| <= radius``; monopole points avoid the string.

    For ``family='MONOPOLE'`` points lie in the shell ``0.5 <= r <= radius``
    with ``r + z > 0.1 r``.
    """
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        v = rng.normal(size=d)
        v /= np.linalg.norm(v)
        if family == "MONOPOLE":
            r = rng.uniform(0.5, radius)
            p = r * v
            if r + p[2] <= 0.1 * r:
                continue
        else:
            r = radius * rng.random() ** (1.0 / d)
            p = r * v
        out.append(p)
    return np.array(out)
