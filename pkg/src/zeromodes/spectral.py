"""Grid Pauli operator, its lowest eigenvalues, and the one-dimensional sharp-constant problems.

The box ``[-L, L]^3`` carries ``n`` nodes per axis including the two boundary nodes,
so the Dirichlet unknowns live on the ``m = n - 2`` interior nodes of each axis.
The operator is assembled as

    H(t) = -Lap_h + i t sum_j (A_j D_j + D_j A_j) + t^2 |A|^2 - t sigma.B

with ``D_j`` the centered first difference and ``Lap_h`` the 7-point Laplacian.
``i(A D + D A)`` is Hermitian because ``A D + D A`` is real antisymmetric.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
import scipy.fft as sfft
import scipy.sparse as sp
from scipy.integrate import quad
from scipy.linalg import solve_banded
from scipy.sparse.linalg import LinearOperator, eigsh, lobpcg

from . import fields as fl
from .clifford import SIGMA
from .exceptions import ConvergenceError, ValidationError
from .jets import variables


def _workers():
    v = os.environ.get("ZM_THREADS")
    return int(v) if v else None


@dataclass(frozen=True)
class GridSpec:
    n: int
    L: float

    def __post_init__(self):
        if self.n < 8:
            raise ValidationError("grid needs n >= 8 nodes per axis")
        if self.h >= 1:
            raise ValidationError(f"grid spacing h = {self.h:.3f} must be < 1")

    @property
    def h(self):
        return 2 * self.L / (self.n - 1)

    @property
    def m(self):
        return self.n - 2

    @property
    def size(self):
        return 2 * self.m ** 3

    def axis(self):
        return np.linspace(-self.L, self.L, self.n)[1:-1]

    def points(self):
        a = self.axis()
        X = np.stack(np.meshgrid(a, a, a, indexing="ij"), axis=-1)
        return X.reshape(-1, 3)

    def box_ground(self):
        """Continuum Dirichlet ground energy ``3 (pi / 2L)^2``."""
        return 3 * (np.pi / (2 * self.L)) ** 2

    def sine_mode(self):
        a = self.axis()
        s = np.cos(np.pi * a / (2 * self.L))
        g = np.einsum("i,j,k->ijk", s, s, s).ravel()
        return np.concatenate([g, np.zeros_like(g)]).astype(complex)


def _sample_fields(grid, family, chunk=40_000):
    pts = grid.points()
    A = np.empty_like(pts)
    B = np.empty_like(pts)
    if family.id == "LOSS_YAU":
        w = family.params["w_unit"]
        return fl.loss_yau_A_closed(pts, w), fl.loss_yau_B_closed(pts, w)
    for s in range(0, len(pts), chunk):
        X = variables(pts[s:s + chunk], order=1)
        Aj = family.A_fn(X)
        A[s:s + chunk] = Aj.val
        B[s:s + chunk] = fl.curl(Aj).val
    return A, B


@dataclass
class PauliOperator:
    grid: GridSpec
    t: float
    matrix: sp.csr_matrix
    family_id: str = ""

    @property
    def shape(self):
        return self.matrix.shape

    def apply(self, v):
        v = np.asarray(v)
        if v.shape[0] != self.grid.size:
            raise ValidationError(f"spinor has {v.shape[0]} entries, grid expects {self.grid.size}")
        return self.matrix @ v

    def hermiticity_gap(self, n_pairs=20, seed=0):
        rng = np.random.default_rng(seed)
        worst = 0.0
        for _ in range(n_pairs):
            u = rng.standard_normal(self.grid.size) + 1j * rng.standard_normal(self.grid.size)
            v = rng.standard_normal(self.grid.size) + 1j * rng.standard_normal(self.grid.size)
            a = np.vdot(u, self.apply(v))
            b = np.vdot(self.apply(u), v)
            worst = max(worst, abs(a - b) / (np.linalg.norm(u) * np.linalg.norm(v)))
        return worst


def _difference_1d(m, h):
    e = np.ones(m)
    D1 = sp.diags([-e[:-1], e[:-1]], [-1, 1]) / (2 * h)
    D2 = sp.diags([e[:-1], -2 * e, e[:-1]], [-1, 0, 1]) / h ** 2
    return D1.tocsr(), D2.tocsr()


def pauli_operator(grid: GridSpec, family=None, t: float = 0.0) -> PauliOperator:
    m, h = grid.m, grid.h
    D1, D2 = _difference_1d(m, h)
    I = sp.identity(m, format="csr")
    Ds = [sp.kron(sp.kron(D1, I), I), sp.kron(sp.kron(I, D1), I), sp.kron(sp.kron(I, I), D1)]
    lap = (sp.kron(sp.kron(D2, I), I) + sp.kron(sp.kron(I, D2), I)
           + sp.kron(sp.kron(I, I), D2))
    S = (-lap).astype(complex)
    fid = ""
    spin = None
    if family is not None and t != 0.0:
        fid = family.id
        A, B = _sample_fields(grid, family)
        for j in range(3):
            Aj = sp.diags(A[:, j])
            S = S + 1j * t * (Aj @ Ds[j] + Ds[j] @ Aj)
        S = S + sp.diags(t * t * np.sum(A * A, axis=1))
        spin = sum(sp.kron(sp.csr_matrix(SIGMA[k]), sp.diags(B[:, k])) for k in range(3))
    H = sp.kron(sp.identity(2), S)
    if spin is not None:
        H = H - t * spin
    return PauliOperator(grid, float(t), H.tocsr(), fid)


def pauli_apply(grid: GridSpec, family, t: float, v) -> np.ndarray:
    return pauli_operator(grid, family, t).apply(v)


def sample_spinor(grid: GridSpec, family) -> np.ndarray:
    """Component-major grid samples of the family's spinor (d = 3)."""
    psi = family.psi_fn(variables(grid.points(), order=0)).val
    return np.concatenate([psi[:, 0], psi[:, 1]])


def _laplace_preconditioner(grid, shift):
    """Exact inverse of ``-Lap_h + shift`` on each spinor component, applied with DST-I."""
    m, h = grid.m, grid.h
    k = np.arange(1, m + 1)
    mu = (4 / h ** 2) * np.sin(np.pi * k / (2 * (m + 1))) ** 2
    lam = mu[:, None, None] + mu[None, :, None] + mu[None, None, :] + shift
    workers = _workers()

    def solve(X):
        X = np.asarray(X)
        one = X.ndim == 1
        X2 = X.reshape(grid.size, -1)
        out = np.empty_like(X2)
        for c in range(X2.shape[1]):
            blk = X2[:, c].reshape(2, m, m, m)
            r = sfft.dstn(blk.real, type=1, axes=(1, 2, 3), norm="ortho", workers=workers)
            i = sfft.dstn(blk.imag, type=1, axes=(1, 2, 3), norm="ortho", workers=workers)
            y = (r + 1j * i) / lam
            r = sfft.idstn(y.real, type=1, axes=(1, 2, 3), norm="ortho", workers=workers)
            i = sfft.idstn(y.imag, type=1, axes=(1, 2, 3), norm="ortho", workers=workers)
            out[:, c] = (r + 1j * i).ravel()
        return out[:, 0] if one else out

    return LinearOperator((grid.size, grid.size), matvec=solve, matmat=solve, dtype=complex)


@dataclass
class EigenResult:
    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray
    iterations: int
    method: str = "lobpcg"


def _residuals(op, vals, vecs):
    R = op.matrix @ vecs - vecs * vals
    return np.linalg.norm(R, axis=0) / np.linalg.norm(vecs, axis=0)


def smallest_eigs(op: PauliOperator, k: int = 1, tol: float = 1e-8, max_iter: int = 500,
                  seed: int = 0, X0=None) -> EigenResult:
    """``k`` lowest eigenpairs with ``|Hv - lam v| < tol |v|``.

    Preconditioned LOBPCG first; if it stalls, ARPACK Lanczos on the same operator.
    """
    n = op.grid.size
    rng = np.random.default_rng(seed)
    nb = k
    X = rng.standard_normal((n, nb)) + 1j * rng.standard_normal((n, nb))
    if X0 is not None:
        X0 = np.asarray(X0).reshape(n, -1)
        X[:, :X0.shape[1]] = X0[:, :nb]
    M = _laplace_preconditioner(op.grid, shift=0.1)
    total = 0
    vals = vecs = None
    for _ in range(4):
        vals, vecs, hist = lobpcg(op.matrix, X, M=M, tol=0.5 * tol, maxiter=max_iter,
                                  largest=False, retResidualNormsHistory=True)
        total += len(hist)
        order = np.argsort(vals)
        vals, vecs = vals[order], vecs[:, order]
        res = _residuals(op, vals[:k], vecs[:, :k])
        if np.all(res < tol):
            return EigenResult(vals[:k], vecs[:, :k], res, total)
        X = vecs
    v0 = vecs[:, 0]
    w, V = eigsh(op.matrix, k=k, which="SA", tol=0.1 * tol, v0=v0, maxiter=50 * max_iter)
    order = np.argsort(w)
    w, V = w[order], V[:, order]
    res = _residuals(op, w, V)
    result = EigenResult(w, V, res, total, "eigsh")
    if not np.all(res < tol):
        raise ConvergenceError(f"eigen residual {res.max():.2e} above {tol:g}", result)
    return result


@dataclass
class ScanPoint:
    t: float
    lambda1: float
    residual: float
    iters: int
    error: str = ""


@dataclass
class ScanCurve:
    points: list = field(default_factory=list)

    @property
    def t(self):
        return np.array([p.t for p in self.points])

    @property
    def lambda1(self):
        return np.array([p.lambda1 for p in self.points])

    def minimum(self):
        i = int(np.nanargmin(self.lambda1))
        return self.points[i].t, self.points[i].lambda1

    def to_csv(self):
        rows = ["t,lambda1,residual,iters"]
        rows += [f"{p.t:.6f},{p.lambda1:.12e},{p.residual:.3e},{p.iters}" for p in self.points]
        return "\n".join(rows) + "\n"


def t_scan(family, grid: GridSpec, t_min: float = 0.0, t_max: float = 2.0, steps: int = 41,
           tol: float = 1e-8, seed: int = 0) -> ScanCurve:
    if steps < 3:
        raise ValidationError("t_scan needs at least 3 steps")
    curve = ScanCurve()
    X0 = None
    for t in np.linspace(t_min, t_max, steps):
        op = pauli_operator(grid, family, float(t))
        try:
            r = smallest_eigs(op, 1, tol=tol, seed=seed, X0=X0)
            X0 = r.vectors
            curve.points.append(ScanPoint(float(t), float(r.values[0]), float(r.residuals[0]),
                                          r.iterations))
        except ConvergenceError as e:
            best = e.result
            curve.points.append(ScanPoint(float(t), float(best.values[0]), float(best.residuals[0]),
                                          best.iterations, "not converged"))
    return curve


def richardson(hs, lams, p=2):
    """Extrapolate ``lam(h) = lam0 + c h^p`` from the two finest grids."""
    h1, h2 = hs[-2], hs[-1]
    l1, l2 = lams[-2], lams[-1]
    r = (h1 / h2) ** p
    return (r * l2 - l1) / (r - 1)


# one-dimensional problems

NAGY = float(np.sqrt(2 / 3))
HARDY_SOBOLEV = float(np.sqrt(8 * np.pi / 3))


def nagy_quotient(f, df, T=np.inf):
    """``int (f'^2 + f^2/4) / (int f^4)^(1/2)`` over ``(-T, T)`` for callables ``f`` and ``f'``."""
    opts = dict(epsabs=0, epsrel=1e-13, limit=400)
    E = quad(lambda t: df(t) ** 2 + f(t) ** 2 / 4, -T, T, **opts)[0]
    N = quad(lambda t: f(t) ** 4, -T, T, **opts)[0]
    return E / np.sqrt(N)


def hs_quotient(u, du):
    """``int |grad u|^2 dx / (int u^4 / |x| dx)^(1/2)`` for radial ``u`` in three dimensions."""
    opts = dict(epsabs=0, epsrel=1e-13, limit=400)
    E = sum(quad(lambda r: du(r) ** 2 * r * r, a, b, **opts)[0] for a, b in ((0, 1), (1, np.inf)))
    N = sum(quad(lambda r: u(r) ** 4 * r, a, b, **opts)[0] for a, b in ((0, 1), (1, np.inf)))
    return 4 * np.pi * E / np.sqrt(4 * np.pi * N)


@dataclass
class MinimizeResult:
    quotient: float
    t: np.ndarray
    f: np.ndarray
    iterations: int
    grad_norm: float


def _stiffness(n, h):
    """Fourth-order ``-D^2`` (stencil ``(1, -16, 30, -16, 1) / 12h^2``) with zero Dirichlet ends."""
    e = np.ones(n)
    return sp.diags([e[:-2], -16 * e[:-1], 30 * e, -16 * e[:-1], e[:-2]], [-2, -1, 0, 1, 2]) \
        .tocsr() / (12 * h * h)


def nagy_minimize(n: int = 2000, T: float = 40.0, f0=None, tol: float = 1e-8,
                  max_iter: int = 5000) -> MinimizeResult:
    """Minimize the Sz.-Nagy quotient on ``n`` interior nodes of ``(-T, T)``.

    Projected descent on ``{h sum f^4 = 1}`` along the Sobolev gradient
    ``L^{-1}(K f - (E/N) f^3)``, ``K = -D^2 + 1/4`` (fourth order), ``L`` its
    three-point counterpart; step by backtracking.
    """
    if n < 500 or T < 30:
        raise ValidationError("need n >= 500 and T >= 30")
    t = np.linspace(-T, T, n + 2)[1:-1]
    h = t[1] - t[0]
    f = np.exp(-t * t / 8) if f0 is None else np.asarray(f0, dtype=float).copy()
    K = _stiffness(n, h) + 0.25 * sp.identity(n)
    ab = np.zeros((3, n))
    ab[0, 1:] = -1 / h ** 2
    ab[1, :] = 2 / h ** 2 + 0.25
    ab[2, :-1] = -1 / h ** 2

    def parts(g):
        return h * g @ (K @ g), h * np.sum(g ** 4)

    def normalize(g):
        return g / (h * np.sum(g ** 4)) ** 0.25

    def Q(g):
        E, N = parts(g)
        return E / np.sqrt(N)

    f = normalize(f)
    q = Q(f)
    step = 1.0
    gn = np.inf
    for it in range(1, max_iter + 1):
        E, N = parts(f)
        d = solve_banded((1, 1), ab, K @ f - (E / N) * f ** 3)
        gn = np.sqrt(h * np.sum(d * d))
        if gn < tol:
            return MinimizeResult(q, t, f, it, gn)
        step = min(1.0, 2 * step)
        while True:
            g = normalize(f - step * d)
            qg = Q(g)
            if qg <= q or step < 1e-12:
                break
            step *= 0.5
        if qg >= q and gn < 1e2 * tol:
            return MinimizeResult(q, t, f, it, gn)
        f, q = g, qg
    raise ConvergenceError(f"Sz.-Nagy descent stalled (gradient {gn:.2e})",
                           MinimizeResult(q, t, f, max_iter, gn))


def sech_fit(res: MinimizeResult):
    """Sup-norm distance between ``f / c`` and ``sech((t - t0)/2)``.

    ``t0`` is the ``f^4``-weighted centre and ``c`` the least-squares amplitude.
    """
    w = res.f ** 4
    t0 = float(np.sum(res.t * w) / np.sum(w))
    model = 1 / np.cosh(np.clip((res.t - t0) / 2, -300, 300))
    c = float(res.f @ model / (model @ model))
    return float(np.max(np.abs(res.f / c - model))), t0, c


@dataclass
class RadialMinimizer:
    quotient: float
    r: np.ndarray
    u: np.ndarray
    inner: MinimizeResult

    def dilate_fit(self):
        """Relative sup distance (for ``|ln r - t0| <= T/2``) of ``u`` from ``(2c / sqrt(r0)) (1 + r/r0)^-1`` with ``r0 = e^t0``."""
        _, t0, c = sech_fit(self.inner)
        r0 = np.exp(t0)
        model = 2 * c / np.sqrt(r0) / (1 + self.r / r0)
        # the Dirichlet ends of the log variable pin u near r = e^{-T}, e^{T}; compare inside
        keep = np.abs(self.inner.t - t0) <= 0.5 * self.inner.t[-1]
        dev = np.max(np.abs(self.u - model)[keep]) / np.max(np.abs(model))
        return float(dev), float(r0)


def hardy_sobolev_minimize(n: int = 2000, T: float = 40.0, f0=None) -> RadialMinimizer:
    """Radial Hardy--Sobolev problem through ``u(r) = r^{-1/2} f(ln r)``.

    The substitution turns ``int |grad u|^2`` into ``4 pi int (f'^2 + f^2/4)`` and
    ``int u^4/|x|`` into ``4 pi int f^4``, so the quotient is ``sqrt(4 pi)`` times Sz.-Nagy.
    """
    inner = nagy_minimize(n, T, f0)
    r = np.exp(inner.t)
    u = inner.f / np.sqrt(r)
    return RadialMinimizer(float(np.sqrt(4 * np.pi) * inner.quotient), r, u, inner)
