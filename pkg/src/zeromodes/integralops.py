"""Singular integral operators: Biot--Savart and the free Dirac Green's function.

Both kernels are ``O(|x-y|^-2)``.  Writing ``y = x + rho * u`` with ``u`` on the
unit sphere, the Jacobian ``rho^2`` cancels the singularity:

    A(x)        = 1/(4 pi)   int_0^inf drho int_S2 u x B(x + rho u) dOmega
    (G * f)(x)  = -i/(4 pi)  int_0^inf drho int_S2 (sigma.u) f(x + rho u) dOmega

The radial integral is split at ``rho = split``: Gauss--Legendre on
``[0, split]`` and on ``theta in [arctan(split), pi/2)`` after ``rho = tan theta``.
The sphere uses Gauss--Legendre in ``cos(polar)`` times the periodic trapezoid
rule in azimuth.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import clifford as cl
from . import fields as fl
from .exceptions import AccuracyError, DomainError
from .jets import variables


@dataclass(frozen=True)
class SingularQuadSpec:
    n_inner: int = 64
    n_outer: int = 96
    n_polar: int = 32
    n_azimuth: int = 64
    split: float = 1.0
    rtol: float = 1e-6
    max_refine: int = 2

    def __post_init__(self):
        if self.split <= 0:
            raise ValueError("split radius must be positive")

    def refined(self):
        return SingularQuadSpec(2 * self.n_inner, 2 * self.n_outer, 2 * self.n_polar,
                                2 * self.n_azimuth, self.split, self.rtol, self.max_refine)


@dataclass
class QuadResult:
    value: np.ndarray
    error: float
    evaluations: int


def _sphere_rule(n_polar, n_azimuth):
    c, wc = np.polynomial.legendre.leggauss(n_polar)
    phi = 2 * np.pi * np.arange(n_azimuth) / n_azimuth
    C, P = np.meshgrid(c, phi, indexing="ij")
    S = np.sqrt(1 - C * C)
    dirs = np.stack([S * np.cos(P), S * np.sin(P), C], axis=-1).reshape(-1, 3)
    w = np.repeat(wc, n_azimuth) * (2 * np.pi / n_azimuth)
    return dirs, w


def _radial_rule(n_inner, n_outer, split):
    x, w = np.polynomial.legendre.leggauss(n_inner)
    r_in = 0.5 * split * (x + 1)
    w_in = 0.5 * split * w
    x, w = np.polynomial.legendre.leggauss(n_outer)
    a, b = np.arctan(split), 0.5 * np.pi
    th = a + 0.5 * (b - a) * (x + 1)
    wt = 0.5 * (b - a) * w
    r_out = np.tan(th)
    w_out = wt / np.cos(th) ** 2
    return np.concatenate([r_in, r_out]), np.concatenate([w_in, w_out])


def _spherical_sum(x, integrand, spec: SingularQuadSpec, chunk=4096):
    """``int drho int dOmega integrand(u, x + rho u)`` with the rule from ``spec``."""
    x = np.asarray(x, dtype=float)
    dirs, wd = _sphere_rule(spec.n_polar, spec.n_azimuth)
    rho, wr = _radial_rule(spec.n_inner, spec.n_outer, spec.split)
    total = None
    for s in range(0, len(rho), max(1, chunk // 64)):
        rr = rho[s:s + max(1, chunk // 64)]
        ww = wr[s:s + max(1, chunk // 64)]
        pts = x + rr[:, None, None] * dirs[None, :, :]
        vals = integrand(np.broadcast_to(dirs, pts.shape), pts)
        part = np.einsum("r,d,rd...->...", ww, wd, vals)
        total = part if total is None else total + part
    return total, len(rho) * len(dirs)


def _adaptive(x, integrand, spec):
    val, n = _spherical_sum(x, integrand, spec)
    err = np.inf
    cur = spec
    for _ in range(spec.max_refine):
        cur = cur.refined()
        val2, n2 = _spherical_sum(x, integrand, cur)
        n += n2
        err = float(np.max(np.abs(val2 - val)))
        scale = max(float(np.max(np.abs(val2))), 1e-300)
        val = val2
        if err <= spec.rtol * scale:
            return QuadResult(val, err, n)
    raise AccuracyError(f"singular quadrature did not reach rtol={spec.rtol:g} "
                        f"(last change {err:.2e})", estimate=val, error=err)


def b_field(family):
    """Vectorized ``y -> B(y)`` for a three-dimensional family."""
    if family.id == "LOSS_YAU":
        w = family.params["w_unit"]
        return lambda y: fl.loss_yau_B_closed(y, w)

    def B(y, chunk=50_000):
        y = np.asarray(y, dtype=float)
        flat = y.reshape(-1, 3)
        out = np.empty_like(flat)
        for s in range(0, len(flat), chunk):
            out[s:s + chunk] = fl.curl(family.A_fn(variables(flat[s:s + chunk], order=1))).val
        return out.reshape(y.shape)

    return B


def biot_savart(B, x, spec: SingularQuadSpec | None = None) -> QuadResult:
    """``A(x) = -(1/4 pi) int (x-y)/|x-y|^3 x B(y) dy`` for a vectorized field ``B``.

    ``B`` may also be a :class:`~zeromodes.fields.FieldFamily`.
    """
    spec = spec or SingularQuadSpec()
    if isinstance(B, fl.FieldFamily):
        B = b_field(B)

    def integrand(u, y):
        return np.cross(u, B(y))

    res = _adaptive(x, integrand, spec)
    res.value = res.value / (4 * np.pi)
    res.error /= 4 * np.pi
    return res


def dirac_green_convolve(f, x, spec: SingularQuadSpec | None = None,
                         rep: cl.CliffordRep | None = None) -> QuadResult:
    """``(G * f)(x)`` with ``G(z) = (i/4 pi) sigma.z / |z|^3`` for a vectorized spinor field ``f``."""
    spec = spec or SingularQuadSpec()
    rep = rep or cl.gamma_rep(3)
    sig = rep.gammas

    def integrand(u, y):
        return np.einsum("...j,jab,...b->...a", u, sig, f(y))

    res = _adaptive(x, integrand, spec)
    res.value = res.value * (-1j / (4 * np.pi))
    res.error /= 4 * np.pi
    return res


def zero_mode_source(family):
    """``y -> sigma.A psi`` for a zero-mode family (so that ``psi = G * source``)."""

    def f(y, chunk=50_000):
        y = np.asarray(y, dtype=float)
        flat = y.reshape(-1, 3)
        out = np.empty((len(flat), family.rep.N), dtype=complex)
        for s in range(0, len(flat), chunk):
            X = variables(flat[s:s + chunk], order=0)
            psi = family.psi_fn(X).val
            A = family.A_fn(X).val
            out[s:s + chunk] = np.einsum("nj,jab,nb->na", A, family.rep.gammas, psi)
        return out.reshape(y.shape[:-1] + (family.rep.N,))

    return f


@dataclass
class CurlDivAudit:
    curl_residual: float
    div: float


def _fd_jacobian(F, x, h, order=2):
    """``J[k, j] = d_j F_k`` by central differences of order 2 or 4."""
    x = np.asarray(x, dtype=float)
    cols = []
    for j in range(len(x)):
        e = np.zeros_like(x)
        e[j] = h
        if order == 2:
            cols.append((F(x + e) - F(x - e)) / (2 * h))
        else:
            cols.append((-F(x + 2 * e) + 8 * F(x + e) - 8 * F(x - e) + F(x - 2 * e)) / (12 * h))
    return np.stack(cols, axis=-1)


def _curl_from_jac(J):
    return np.array([J[2, 1] - J[1, 2], J[0, 2] - J[2, 0], J[1, 0] - J[0, 1]])


def curl_div_audit(A_numeric, x, h: float = 5e-3, B=None) -> CurlDivAudit:
    """Central-difference ``|curl A - B|`` and ``|div A|`` at ``x``."""
    J = _fd_jacobian(lambda p: np.asarray(A_numeric(p), dtype=float), x, h)
    c = _curl_from_jac(J)
    res = np.linalg.norm(c - np.asarray(B(x))) if B is not None else np.linalg.norm(c)
    return CurlDivAudit(float(res), float(abs(np.trace(J))))


def gauge_difference_check(A, A_prime, x, h: float = 1e-3) -> float:
    """``|curl (A - A')|`` at ``x`` by fourth-order differences; ``x`` must be off the z-axis."""
    x = np.asarray(x, dtype=float)
    rho = np.hypot(x[0], x[1])
    if rho <= 4 * h:
        raise DomainError("gauge comparison needs a point off the z-axis (x^2 + y^2 > 0)")
    J = _fd_jacobian(lambda p: np.asarray(A(p)) - np.asarray(A_prime(p)), x, h, order=4)
    return float(np.linalg.norm(_curl_from_jac(J)))


def family_vector(family, which="A"):
    """Point function ``p -> value`` of ``A`` or ``A_prime`` for finite-difference audits."""
    return lambda p: fl.eval_family(family, which, np.asarray(p, float), order=0).val
