"""Radial L^p / weak-L^p norms, sharp constants and bound tables.

All in-scope fields have radial moduli, so every norm reduces to a
one-dimensional integral ``|S^{d-1}| int_0^inf f(r)^p r^{d-1} dr``.  The
half-line is mapped to ``(0, pi/2)`` by ``r = tan(theta)`` and integrated with
adaptive Gauss--Kronrod (``scipy.integrate.quad``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, optimize, special

from . import fields as fl
from .exceptions import DivergenceError, UnsupportedError, ValidationError
from .jets import variables

ALPHA = 1 / 137.035999


# ---------------------------------------------------------------------------
# constants


def sphere_area(d: int) -> float:
    """``|S^d| = 2 pi^{(d+1)/2} / Gamma((d+1)/2)`` (the unit sphere in R^{d+1})."""
    return 2.0 * math.pi ** ((d + 1) / 2) / math.gamma((d + 1) / 2)


def ball_volume(d: int) -> float:
    """Volume of the unit ball in R^d."""
    return sphere_area(d - 1) / d


def sobolev(d: int) -> float:
    """``S_d = d(d-2)/4 |S^d|^{2/d}``."""
    return d * (d - 2) / 4.0 * sphere_area(d) ** (2.0 / d)


def nu_of(d: int) -> int:
    return d // 2


@dataclass(frozen=True)
class Constants:
    alpha: float = ALPHA

    sphere_area = staticmethod(sphere_area)
    sobolev = staticmethod(sobolev)
    ball_volume = staticmethod(ball_volume)

    @staticmethod
    def magnetic_bound(d: int = 3) -> float:
        """Right side ``nu^{-1/2} (d-1)/(d-2) S_d`` of the field-strength bound (``2 S_3`` for d=3)."""
        return nu_of(d) ** -0.5 * (d - 1) / (d - 2) * sobolev(d)

    @staticmethod
    def lambda_bound(d: int = 3) -> float:
        """``S_d / (d(d-2)) = |S^d|^{2/d} / 4``."""
        return sobolev(d) / (d * (d - 2))

    @staticmethod
    def weak_bound() -> float:
        """``(1/2)(4 pi / 3)^{2/3}``."""
        return 0.5 * (4 * math.pi / 3) ** (2 / 3)

    @staticmethod
    def zc_bound() -> float:
        return 32 * math.pi / 3

    @staticmethod
    def hardy_sobolev() -> float:
        return math.sqrt(8 * math.pi / 3)

    @staticmethod
    def nagy() -> float:
        return math.sqrt(2 / 3)

    @staticmethod
    def spin_hls(d: int) -> float:
        """``((d-2)/d)^{1/2} S_d^{-1/2}``."""
        return math.sqrt((d - 2) / d) / math.sqrt(sobolev(d))


def z_from_quotient(q: float, alpha: float = ALPHA) -> float:
    """Convert ``8 pi alpha^2 Z`` back to ``Z``."""
    return q / (8 * math.pi * alpha**2)


# ---------------------------------------------------------------------------
# radial profiles


@dataclass
class RadialProfile:
    f: Callable[[np.ndarray], np.ndarray]
    monotone_nonincreasing: bool = False
    decay: float | None = None  # f ~ r^-decay at infinity, if known
    name: str = ""

    def __call__(self, r):
        return self.f(np.asarray(r, dtype=float))

    def audit_monotone(self, lo=1e-6, hi=1e6, n=400, rtol=1e-12) -> bool:
        r = np.geomspace(lo, hi, n)
        v = self(r)
        return bool(np.all(np.diff(v) <= rtol * np.abs(v[:-1]) + 1e-300))


def _tail_slope(prof, r0, r1):
    a, b = float(prof(np.array([r0]))[0]), float(prof(np.array([r1]))[0])
    if a <= 0 or b <= 0:
        return None
    return (math.log(b) - math.log(a)) / (math.log(r1) - math.log(r0))


def _check_integrable(prof, p, d):
    s_inf = _tail_slope(prof, 1e6, 1e7)
    if s_inf is not None and p * s_inf + d >= -1e-6:
        raise DivergenceError(f"{prof.name or 'profile'}: tail ~ r^{s_inf:.3f}, "
                              f"|f|^{p} r^{d - 1} not integrable at infinity")
    s0 = _tail_slope(prof, 1e-7, 1e-6)
    if s0 is not None and p * s0 + d <= 1e-6:
        raise DivergenceError(f"{prof.name or 'profile'}: f ~ r^{s0:.3f} at 0, "
                              f"|f|^{p} r^{d - 1} not integrable at the origin")


def radial_integral(prof, weight_power: float, p: float = 1.0, rtol=1e-12) -> float:
    """``int_0^inf f(r)^p r^weight_power dr`` via ``r = tan(theta)``."""

    def g(th):
        r = math.tan(th)
        c = math.cos(th)
        v = float(prof(np.array([r]))[0])
        if v == 0.0:
            return 0.0
        return abs(v) ** p * r**weight_power / (c * c)

    # split at r = 1 (theta = pi/4) where most profiles have their scale
    a, _ = integrate.quad(g, 0.0, math.pi / 4, epsabs=0.0, epsrel=rtol, limit=400)
    b, _ = integrate.quad(g, math.pi / 4, math.pi / 2, epsabs=0.0, epsrel=rtol, limit=400)
    return a + b


def lp_norm_radial(profile: RadialProfile, p: float, d: int) -> float:
    """``(|S^{d-1}| int_0^inf f^p r^{d-1} dr)^{1/p}``."""
    if p <= 0:
        raise ValidationError("p must be positive")
    _check_integrable(profile, p, d)
    I = radial_integral(profile, d - 1, p)
    return (sphere_area(d - 1) * I) ** (1.0 / p)


def weak_lp_radial(profile: RadialProfile, p: float, d: int = 3) -> float:
    """``|B_1|^{1/p} sup_r r^{d/p} f(r)`` for a nonincreasing radial profile.

    The supremum is bracketed on a log grid and refined by a bounded scalar
    search in ``log r``; suprema approached at ``r -> 0`` or ``r -> inf`` are
    taken as limits along geometric sequences.
    """
    if not profile.monotone_nonincreasing:
        raise UnsupportedError("weak norms are computed only for nonincreasing radial profiles")
    if not profile.audit_monotone():
        raise ValidationError(f"profile {profile.name!r} flagged monotone but is not")
    s = _weak_sup(profile, d / p)
    return ball_volume(d) ** (1.0 / p) * s


def _weak_sup(profile, k):
    def h(t):
        r = math.exp(t)
        return r**k * float(profile(np.array([r]))[0])

    ts = np.linspace(math.log(1e-8), math.log(1e8), 1601)
    rs = np.exp(ts)
    vals = rs**k * np.asarray(profile(rs), dtype=float)
    i = int(np.argmax(vals))
    best = vals[i]
    if 0 < i < len(ts) - 1:
        res = optimize.minimize_scalar(lambda t: -h(t), bounds=(ts[i - 1], ts[i + 1]),
                                       method="bounded", options={"xatol": 1e-12})
        best = max(best, -res.fun)
    else:
        # limit at an endpoint: walk further out until the values settle
        sign = 1 if i == len(ts) - 1 else -1
        prev = best
        for e in (12, 16, 24, 32):
            cur = h(sign * e * math.log(10))
            if not np.isfinite(cur):
                break
            if cur > 10 * max(prev, 1e-300) and e >= 24:
                raise DivergenceError("r^{d/p} f(r) is unbounded")
            best = max(best, cur)
            prev = cur
    return best


def weak_lp_distribution(profile: RadialProfile, p: float, d: int = 3) -> float:
    """Independent route: ``sup_t t |{f > t}|^{1/p}`` with level radii found by root bracketing.

    For a nonincreasing profile ``{f > t}`` is the ball of radius ``R_t``
    with ``f(R_t) = t``.
    """
    r = np.geomspace(1e-10, 1e10, 4001)
    fv = profile(r)
    ts = fv[(fv > 0) & np.isfinite(fv)]
    if len(ts) == 0:
        return 0.0
    tt = np.geomspace(ts.min(), ts.max(), 801)[1:-1]
    vol = ball_volume(d)

    def level_radius(t):
        return optimize.brentq(lambda lr: float(profile(np.array([math.exp(lr)]))[0]) - t,
                               math.log(1e-10), math.log(1e10), xtol=1e-14, rtol=1e-14)

    def val(t):
        R = math.exp(level_radius(t))
        return t * (vol * R**d) ** (1.0 / p)

    vs = np.array([val(t) for t in tt])
    i = int(np.argmax(vs))
    best = vs[i]
    if 0 < i < len(tt) - 1:
        res = optimize.minimize_scalar(lambda lt: -val(math.exp(lt)),
                                       bounds=(math.log(tt[i - 1]), math.log(tt[i + 1])),
                                       method="bounded", options={"xatol": 1e-12})
        best = max(best, -res.fun)
    return best


# ---------------------------------------------------------------------------
# profiles from families


def _direction(d):
    v = np.ones(d)
    return v / np.linalg.norm(v)


def _family_values(family, which, pts):
    if which == "psi":
        psi = fl.eval_family(family, "psi", pts, order=0).val
        return np.linalg.norm(psi, axis=-1)
    if which == "B":
        F = fl.eval_family(family, "B", pts, order=1).val
        return fl.field_norm(F)
    if which == "A":
        return np.linalg.norm(fl.eval_family(family, "A", pts, order=0).val, axis=-1)
    if which == "lambda":
        return np.abs(fl.eval_family(family, "lambda", pts, order=0).val)
    raise ValidationError(f"no radial profile for {which!r}")


def family_profile(family, which: str, monotone: bool | None = None) -> RadialProfile:
    """Radial profile of ``|psi|``, ``|B|``, ``|A|`` or ``lambda`` along a fixed direction."""
    e = _direction(family.d)

    def f(r):
        r = np.atleast_1d(np.asarray(r, dtype=float))
        return _family_values(family, which, r[:, None] * e)

    prof = RadialProfile(f, False, None, f"{family.name}:{which}")
    if monotone is None:
        monotone = prof.audit_monotone()
    prof.monotone_nonincreasing = bool(monotone)
    return prof


def isotropy_audit(family, which: str, radii=(0.1, 0.5, 1.0, 2.0, 4.0), n_dirs=32,
                   seed=0) -> float:
    """Max relative spread of the modulus over random directions at fixed radius."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for r in radii:
        v = rng.normal(size=(n_dirs, family.d))
        v /= np.linalg.norm(v, axis=1)[:, None]
        if family.id == "MONOPOLE":
            v[:, 2] = np.abs(v[:, 2])  # stay clear of the string
        vals = _family_values(family, which, r * v)
        worst = max(worst, (vals.max() - vals.min()) / max(abs(vals).max(), 1e-300))
    return float(worst)


def power_profile(c: float, a: float, name="") -> RadialProfile:
    """``c r^{-a}``."""
    return RadialProfile(lambda r: c * np.asarray(r, float) ** (-a), a >= 0, a, name)


def rational_profile(c: float, b: float, name="") -> RadialProfile:
    """``c (1+r^2)^{-b}``."""
    return RadialProfile(lambda r: c * (1 + np.asarray(r, float) ** 2) ** (-b), True, 2 * b, name)


# ---------------------------------------------------------------------------
# Z_c quotient


@dataclass
class ZcReport:
    family: str
    quotient: float
    B2: float
    psi2: float
    coulomb: float
    bound: float = 32 * math.pi / 3
    alpha: float = ALPHA

    @property
    def z(self):
        return z_from_quotient(self.quotient, self.alpha)

    @property
    def z_bound(self):
        return z_from_quotient(self.bound, self.alpha)

    @property
    def ratio(self):
        return self.quotient / self.bound


def zc_quotient(family, alpha: float = ALPHA) -> ZcReport:
    """``(int |B|^2)(int |psi|^2) / int |psi|^2/|x|`` for a three-dimensional family."""
    if family.d != 3:
        raise ValidationError("the critical-charge quotient is three-dimensional")
    pB = family_profile(family, "B")
    pP = family_profile(family, "psi")
    B2 = lp_norm_radial(pB, 2, 3) ** 2
    P2 = lp_norm_radial(pP, 2, 3) ** 2
    _check_integrable(pP, 2, 2)
    C = sphere_area(2) * radial_integral(pP, 1, 2)
    return ZcReport(family.name, B2 * P2 / C, B2, P2, C, alpha=alpha)


# ---------------------------------------------------------------------------
# bound tables


@dataclass
class BoundReport:
    theorem: str
    family: str
    d: int
    lhs: float
    bound: float
    ratio: float
    equality: bool

    def as_row(self):
        return {"theorem": self.theorem, "family": self.family, "d": self.d,
                "lhs": self.lhs, "bound": self.bound, "ratio": self.ratio,
                "equality": self.equality}


THEOREMS = ("MAGNETIC", "SPINOR", "GENMAGNETIC", "SPINORGENERAL", "MAGNETICWEAK",
            "IMPROVEDZ", "HARDY_WEAK", "SPIN_HLS")


def _report(theorem, family, d, lhs, bound, le=False):
    ratio = bound / lhs if le else lhs / bound
    return BoundReport(theorem, family, d, float(lhs), float(bound), float(ratio),
                       bool(abs(ratio - 1) < 1e-6))


def bound_table(theorem: str, family=None, d: int | None = None) -> BoundReport:
    """Left side, bound and ratio for one theorem/family pair.

    ``ratio >= 1`` means the inequality holds; ``equality`` is set when
    ``|ratio - 1| < 1e-6``.  ``family`` may be a :class:`FieldFamily` or a
    name accepted by :func:`fields.build_family`.
    """
    t = theorem.upper()
    if t not in THEOREMS:
        raise ValidationError(f"unknown theorem {theorem!r}")
    if isinstance(family, str):
        family = fl.build_family(family, d)
    if d is None:
        d = family.d if family is not None else 3

    if t == "MAGNETIC":
        _need(family, 3, "A")
        lhs = lp_norm_radial(family_profile(family, "B"), 1.5, 3)
        return _report(t, family.name, 3, lhs, 2 * sobolev(3))
    if t == "GENMAGNETIC":
        _need(family, family.d, "A")
        dd = family.d
        lhs = lp_norm_radial(family_profile(family, "B"), dd / 2, dd)
        return _report(t, family.name, dd, lhs, Constants.magnetic_bound(dd))
    if t in ("SPINOR", "SPINORGENERAL"):
        if family is None:
            family = fl.spinor_family(d)
        dd = family.d
        if t == "SPINOR" and dd != 3:
            raise ValidationError("SPINOR is the d = 3 statement; use SPINORGENERAL")
        if family.lam_fn is None:
            raise ValidationError(f"{family.name} has no lambda")
        lhs = lp_norm_radial(family_profile(family, "lambda"), dd, dd) ** 2
        return _report(t, family.name, dd, lhs, Constants.lambda_bound(dd))
    if t == "MAGNETICWEAK":
        _need(family, 3, "A")
        lhs = weak_lp_radial(family_profile(family, "B", monotone=True), 1.5, 3)
        return _report(t, family.name, 3, lhs, Constants.weak_bound())
    if t == "IMPROVEDZ":
        _need(family, 3, "A")
        z = zc_quotient(family)
        return _report(t, family.name, 3, z.quotient, z.bound)
    if t == "HARDY_WEAK":
        # a potential V: sup r^2 V*(r) >= 1/4 is necessary for a bound state
        prof = family if isinstance(family, RadialProfile) else power_profile(0.25, 2, "V=1/(4r^2)")
        lhs = _weak_sup(prof, 2.0)
        return _report(t, prof.name, 3, lhs, 0.25)
    if t == "SPIN_HLS":
        if family is None:
            family = fl.hls_optimizer(d)
        dd = family.d
        prof = family_profile(family, "psi")
        q = 2 * dd / (dd + 1)
        # (-i gamma.grad)^{-1} phi = |phi|^{-2/(d+1)} phi / d, so the quotient is ||phi||_q^{q-2} / d
        C = lp_norm_radial(prof, q, dd) ** (-2.0 / (dd + 1)) / dd
        return _report(t, family.name, dd, C, Constants.spin_hls(dd), le=True)
    raise AssertionError(t)


def _need(family, d, what):
    if family is None:
        raise ValidationError("this theorem needs a field family")
    if family.d != d:
        raise ValidationError(f"{family.name} has d={family.d}, theorem needs d={d}")
    if what == "A" and family.A_fn is None:
        raise ValidationError(f"{family.name} carries no vector potential")


def hijazi_constant_check(d: int) -> float:
    """``|(d/(d-2)) S_d - (d^2/4)|S^d|^{2/d}|``."""
    if d < 3:
        raise ValidationError("needs d >= 3")
    lhs = d / (d - 2) * sobolev(d)
    rhs = d * d / 4.0 * sphere_area(d) ** (2.0 / d)
    return abs(lhs - rhs)


# ---------------------------------------------------------------------------
# integration by parts on a box


@dataclass
class ByPartsResult:
    lhs: complex
    rhs: complex
    order: int

    @property
    def gap(self):
        return abs(self.lhs - self.rhs)


def bump_spinor(phi0, radius: float = 2.0, center=None, a: float = 4.0):
    """``eta(x) = exp(a - a / (1 - |x-c|^2/R^2)) phi0`` inside the ball, zero outside (jet function).

    Larger ``a`` flattens the approach to the support edge, which tensor
    Gauss--Legendre resolves much faster.
    """
    phi0 = np.asarray(phi0, dtype=complex)

    def eta(X):
        c = np.zeros(X.dim) if center is None else np.asarray(center, float)
        Y = X - c
        s2 = (Y * Y).sum() * (1.0 / radius**2)
        inside = s2.val < 1.0
        # keep the formula finite outside; the mask zeroes it afterwards
        s2 = s2 * inside + 0.5 * (~inside)
        b = (a - a * (1.0 - s2).reciprocal()).exp() * inside
        return b.expand() * phi0

    eta.support = (np.zeros(0) if center is None else np.asarray(center, float), radius)
    return eta


def _tensor_rule(rule, order, box, d):
    if rule == "gauss":
        x1, w1 = np.polynomial.legendre.leggauss(order)
        x1, w1 = x1 * box, w1 * box
    elif rule == "trapezoid":
        # spectrally accurate for integrands that vanish with all derivatives at the box faces
        x1 = np.linspace(-box, box, order + 2)[1:-1]
        w1 = np.full(order, x1[1] - x1[0])
    else:
        raise ValidationError(f"unknown rule {rule!r}")
    grids = np.meshgrid(*([x1] * d), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    wts = np.ones(len(pts))
    for g in np.meshgrid(*([w1] * d), indexing="ij"):
        wts = wts * g.ravel()
    return pts, wts


def integral_byparts_check(psi_fn, eta_fn, A_fn, rep, box: float, order: int = 24,
                           chunk: int = 200_000, rule: str = "gauss") -> ByPartsResult:
    """Both sides of ``int <Pi eta, Pi psi> = int <g.Pi eta, g.Pi psi> - int <eta, F_B psi>``.

    ``Pi = grad - iA`` and ``F_B = (i/2) sum gamma_j gamma_k F_jk``; for d = 3
    ``-F_B = sigma.B``.  Tensor rule with ``order`` nodes per axis on
    ``[-box, box]^d``: Gauss--Legendre (default) or the trapezoid rule.
    """
    d = rep.d
    sup = getattr(eta_fn, "support", None)
    if sup is not None:
        c, R = sup
        c = np.zeros(d) if len(c) == 0 else c
        if np.any(np.abs(c) + R >= box):
            raise ValidationError("bump support touches the box boundary")
    pts, wts = _tensor_rule(rule, order, box, d)
    lhs = 0j
    rhs = 0j
    for s in range(0, len(pts), chunk):
        P = pts[s:s + chunk]
        W = wts[s:s + chunk]
        X = variables(P, order=1)
        psi = psi_fn(X)
        eta = eta_fn(X)
        if A_fn is None:
            Av = np.zeros(P.shape)
            F = np.zeros(P.shape + (d,))
        else:
            A = A_fn(X)
            Av = A.val
            F = fl.field_strength(A).val
        Dp = np.swapaxes(psi.grad, -1, -2) - 1j * Av[..., None] * psi.val[:, None, :]
        De = np.swapaxes(eta.grad, -1, -2) - 1j * Av[..., None] * eta.val[:, None, :]
        lhs += np.sum(W * np.sum(np.conj(De) * Dp, axis=(-1, -2)))
        gDp = np.einsum("jab,njb->na", rep.gammas, Dp)
        gDe = np.einsum("jab,njb->na", rep.gammas, De)
        FB = 0.5j * np.einsum("njk,jab,kbc->nac", F, rep.gammas, rep.gammas)
        spin = np.einsum("na,nab,nb->n", np.conj(eta.val), FB, psi.val)
        rhs += np.sum(W * (np.sum(np.conj(gDe) * gDp, axis=-1) - spin))
    return ByPartsResult(complex(lhs), complex(rhs), order)


# ---------------------------------------------------------------------------
# closed-form radial integrals


@dataclass
class RadialEntry:
    name: str
    closed: float
    beta: float
    quad: float

    @property
    def err(self):
        return max(abs(self.quad - self.closed), abs(self.beta - self.closed))


def beta_rational(a: float, b: float) -> float:
    """``int_0^inf r^{a-1} (1+r^2)^{-b} dr = B(a/2, b - a/2) / 2``."""
    return special.beta(a / 2, b - a / 2) / 2


def beta_linear(a: float, b: float) -> float:
    """``int_0^inf r^{a-1} (1+r)^{-b} dr = B(a, b - a)``."""
    return special.beta(a, b - a)


def green_radial_integrals() -> list[RadialEntry]:
    """Closed-form radial integrals with a Beta-function and a quadrature cross-check."""
    rows = [
        ("r^2 (1+r^2)^-3", math.pi / 16, beta_rational(3, 3), (lambda r: (1 + r * r) ** -3, 2)),
        ("r^2 (1+r^2)^-4", math.pi / 32, beta_rational(3, 4), (lambda r: (1 + r * r) ** -4, 2)),
        ("r (1+r^2)^-2", 0.5, beta_rational(2, 2), (lambda r: (1 + r * r) ** -2, 1)),
        ("r^2 (1+r^2)^-2", math.pi / 4, beta_rational(3, 2), (lambda r: (1 + r * r) ** -2, 2)),
        ("r^2 (1+r)^-4", 1 / 3, beta_linear(3, 4), (lambda r: (1 + r) ** -4, 2)),
        ("r (1+r)^-4", 1 / 6, beta_linear(2, 4), (lambda r: (1 + r) ** -4, 1)),
    ]
    out = []
    for name, closed, beta, (f, k) in rows:
        q = radial_integral(RadialProfile(f), k, 1.0)
        out.append(RadialEntry(name, closed, float(beta), q))
    return out
