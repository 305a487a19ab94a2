"""Clifford algebra representations and the second-quantization toolkit.

Gamma matrices are built by recursive tensor doubling starting from the two
Pauli matrices ``sigma_1, sigma_2`` in ``d = 2``; odd dimensions append the
Hermitian chirality element.  The construction is deterministic, so
``gamma_rep(d)`` returns bit-identical matrices on every call.  For ``d = 3`` it
returns the Pauli triple ``(sigma_1, sigma_2, sigma_3)`` itself.

Indices in docstrings are 1-based to match the usual physics notation; arrays
are 0-based (``rep.gammas[0]`` is ``gamma_1``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

from .exceptions import (
    DegenerateRepresentationError,
    InvalidDimensionError,
    NoIntertwinerError,
    UnsupportedError,
    ValidationError,
)

SIGMA = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)
I2 = np.eye(2, dtype=complex)

MAX_DIM = 10


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CliffordRep:
    """Hermitian ``N x N`` matrices with ``gamma_j gamma_k + gamma_k gamma_j = 2 delta_jk``."""

    d: int
    nu: int
    N: int
    gammas: np.ndarray  # shape (d, N, N)

    def __post_init__(self):
        object.__setattr__(self, "gammas", _frozen(self.gammas))

    def slash(self, v):
        """``gamma . v`` for a vector (or batch of vectors) ``v``."""
        return np.tensordot(np.asarray(v), self.gammas, axes=([-1], [0]))

    def anticommutator_residual(self) -> float:
        g = self.gammas
        eye = np.eye(self.N)
        worst = 0.0
        for j in range(self.d):
            for k in range(j, self.d):
                r = g[j] @ g[k] + g[k] @ g[j] - 2.0 * (j == k) * eye
                worst = max(worst, np.abs(r).max())
        return worst

    def hermiticity_residual(self) -> float:
        return max(np.abs(g - g.conj().T).max() for g in self.gammas)


@dataclass(frozen=True, eq=False)
class LadderSet:
    cs: np.ndarray  # (nu, N, N) annihilators c_j = (gamma_{2j} + i gamma_{2j+1}) / 2
    cdags: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "cs", _frozen(self.cs))
        object.__setattr__(self, "cdags", _frozen(self.cdags))

    @property
    def nu(self):
        return len(self.cs)

    def car_residual(self) -> float:
        """Largest violation of the canonical anticommutation relations."""
        cs, cd = self.cs, self.cdags
        N = cs.shape[-1] if len(cs) else 1
        eye = np.eye(N)
        worst = 0.0
        for j in range(self.nu):
            worst = max(worst,
                        np.abs(cs[j] @ cd[j] + cd[j] @ cs[j] - eye).max(),
                        np.abs(cs[j] @ cs[j]).max(),
                        np.abs(cd[j] @ cd[j]).max())
            for k in range(self.nu):
                if k == j:
                    continue
                worst = max(worst,
                            np.abs(cs[j] @ cs[k] + cs[k] @ cs[j]).max(),
                            np.abs(cd[j] @ cd[k] + cd[k] @ cd[j]).max(),
                            np.abs(cs[j] @ cd[k] + cd[k] @ cs[j]).max())
        return worst


@dataclass(frozen=True, eq=False)
class Vacuum:
    """Unit spinor annihilated by every ``c_j`` with ``gamma_1 phi = phi``.

    ``rep`` is the representation in the convention where ``gamma_1 phi = phi``
    holds; it differs from the input only by the sign of ``gamma_1`` when
    ``gamma1_flipped`` is set.
    """

    phi: np.ndarray
    rep: CliffordRep
    gamma1_flipped: bool = False

    def __post_init__(self):
        object.__setattr__(self, "phi", _frozen(self.phi))


@dataclass(frozen=True, eq=False)
class OmegaMatrix:
    omega: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "omega", _frozen(self.omega))


@dataclass(frozen=True, eq=False)
class AntisymCanonical:
    """Orthogonal ``R`` and block form ``D`` with ``B = R D R^T``."""

    R: np.ndarray
    Ds: np.ndarray
    D: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("R", "Ds", "D"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    def reconstruction_residual(self, B) -> float:
        return float(np.abs(self.R @ self.D @ self.R.T - B).max())


# ---------------------------------------------------------------------------
# representations


def nu_of(d: int) -> int:
    return d // 2


def _even_gammas(nu: int):
    gam = [SIGMA[0], SIGMA[1]]
    for _ in range(nu - 1):
        chi = _chirality_even(gam)
        n = gam[0].shape[0]
        gam = [np.kron(g, SIGMA[0]) for g in gam] + [
            np.kron(chi, SIGMA[0]),
            np.kron(np.eye(n), SIGMA[1]),
        ]
    return gam


def _chirality_even(gam):
    nu = len(gam) // 2
    P = np.eye(gam[0].shape[0], dtype=complex)
    for g in gam:
        P = P @ g
    return (1j) ** (-nu) * P


def gamma_rep(d: int) -> CliffordRep:
    """Deterministic Hermitian Clifford representation of size ``2**(d//2)``."""
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise InvalidDimensionError(f"d must be an integer >= 2, got {d!r}")
    if d > MAX_DIM:
        raise InvalidDimensionError(f"d={d} exceeds the supported maximum {MAX_DIM}")
    nu = nu_of(d)
    gam = _even_gammas(nu)
    if d % 2:
        gam.append(_chirality_even(gam))
    gam = np.array(gam)
    # the products above are exact in {0, +-1, +-i}; drop signed zeros and rounding
    gam = np.round(gam.real) + 1j * np.round(gam.imag)
    return CliffordRep(d=d, nu=nu, N=2**nu, gammas=gam)


def rep_from_gammas(gammas) -> CliffordRep:
    g = np.asarray(gammas, dtype=complex)
    d, N = g.shape[0], g.shape[1]
    nu = nu_of(d)
    if N != 2**nu:
        raise ValidationError(f"{d} gammas of size {N}; expected size {2**nu}")
    return CliffordRep(d=d, nu=nu, N=N, gammas=g)


def chirality_sign(rep: CliffordRep) -> int:
    """Sign ``s`` in ``gamma_1 ... gamma_d = i^nu s I`` (odd ``d`` only)."""
    if rep.d % 2 == 0:
        raise UnsupportedError("chirality sign is a scalar only in odd dimension")
    P = np.eye(rep.N, dtype=complex)
    for g in rep.gammas:
        P = P @ g
    s = (1j) ** (-rep.nu) * P[0, 0]
    return 1 if s.real > 0 else -1


def rotate_rep(rep: CliffordRep, R) -> CliffordRep:
    """``gamma'_j = sum_k R_jk gamma_k`` for an orthogonal ``R``."""
    R = np.asarray(R, dtype=float)
    return rep_from_gammas(np.einsum("jk,kab->jab", R, rep.gammas))


def conjugate_rep(rep: CliffordRep, V) -> CliffordRep:
    """``gamma'_j = V^* gamma_j V``."""
    V = np.asarray(V)
    return rep_from_gammas(V.conj().T[None] @ rep.gammas @ V[None])


def random_unitary(N: int, rng) -> np.ndarray:
    return stats.unitary_group.rvs(N, random_state=rng) if N > 1 else np.exp(
        2j * np.pi * rng.random()) * np.ones((1, 1))


def random_rotation(d: int, rng) -> np.ndarray:
    """Haar-random element of SO(d)."""
    return stats.special_ortho_group.rvs(d, random_state=rng)


# ---------------------------------------------------------------------------
# second quantization (odd d)


def ladder_ops(rep: CliffordRep) -> LadderSet:
    if rep.d % 2 == 0:
        raise UnsupportedError("ladder construction singles out gamma_1 and needs odd d")
    g = rep.gammas
    cs = np.array([(g[2 * j - 1] + 1j * g[2 * j]) / 2 for j in range(1, rep.nu + 1)])
    cdags = np.array([c.conj().T for c in cs])
    return LadderSet(cs=cs, cdags=cdags)


def _fix_phase(v, tol=1e-12):
    mags = np.abs(v)
    i = int(np.argmax(mags >= mags.max() - tol))
    return v * (np.conj(v[i]) / mags[i])


def find_vacuum(rep: CliffordRep, ladder: LadderSet | None = None, tol=1e-12) -> Vacuum:
    """Vacuum by the iterative procedure: null vector of ``c_1``, then apply ``c_k`` where nonzero."""
    if rep.d % 2 == 0:
        raise UnsupportedError("vacuum construction needs odd d")
    if ladder is None:
        ladder = ladder_ops(rep)
    if rep.nu == 0:
        raise DegenerateRepresentationError("no ladder operators for d=1")
    _, s, vh = np.linalg.svd(ladder.cs[0])
    null = vh[np.abs(s) < tol].conj()
    if len(null) == 0:
        raise DegenerateRepresentationError("c_1 has trivial kernel")
    phi = null[0]
    for c in ladder.cs[1:]:
        w = c @ phi
        if np.linalg.norm(w) > tol:
            phi = w / np.linalg.norm(w)
    phi = _fix_phase(phi / np.linalg.norm(phi))
    if max(np.linalg.norm(c @ phi) for c in ladder.cs) > 1e-10:
        raise DegenerateRepresentationError("iteration did not produce a common null vector")

    g1phi = rep.gammas[0] @ phi
    flipped = bool(np.vdot(phi, g1phi).real < 0)
    if flipped:
        g = np.array(rep.gammas)
        g[0] = -g[0]
        rep = rep_from_gammas(g)
    return Vacuum(phi=phi, rep=rep, gamma1_flipped=flipped)


def fock_patterns(nu: int):
    return list(itertools.product((0, 1), repeat=nu))


def creation_state(ladder: LadderSet, vac: Vacuum, indices) -> np.ndarray:
    """``c*_{k_1} ... c*_{k_m} phi`` for 1-based indices (repeats allowed)."""
    v = np.array(vac.phi)
    for k in reversed(list(indices)):
        v = ladder.cdags[k - 1] @ v
    return v


def fock_basis(ladder: LadderSet, vac: Vacuum) -> np.ndarray:
    """Rows ``|beta>`` for all bit patterns ``beta`` in lexicographic order."""
    out = []
    for beta in fock_patterns(ladder.nu):
        idx = [j + 1 for j, b in enumerate(beta) if b]
        out.append(creation_state(ladder, vac, idx))
    return np.array(out)


def canonical_omega(d: int) -> np.ndarray:
    """``diag(0, -i sigma_2, ..., -i sigma_2)`` as a real matrix."""
    om = np.zeros((d, d))
    for k in range(1, d - 1, 2):
        om[k, k + 1] = -1.0
        om[k + 1, k] = 1.0
    return om


def omega_matrix(rep: CliffordRep, vac: Vacuum) -> OmegaMatrix:
    """Entries ``<phi, i gamma_a gamma_b phi>`` for ``a != b``, both >= 2; zero elsewhere."""
    g = vac.rep.gammas
    phi = vac.phi
    if abs(np.vdot(phi, g[0] @ phi) - 1.0) > 1e-10:
        raise ValidationError("vacuum convention gamma_1 phi = phi violated")
    d = rep.d
    om = np.zeros((d, d), dtype=complex)
    for a in range(1, d):
        for b in range(1, d):
            if a != b:
                om[a, b] = np.vdot(phi, 1j * g[a] @ g[b] @ phi)
    if np.abs(om.imag).max() > 1e-12:
        raise DegenerateRepresentationError("omega has a non-negligible imaginary part")
    return OmegaMatrix(omega=om.real)


# ---------------------------------------------------------------------------
# intertwiners


def intertwiner(repA: CliffordRep, repB: CliffordRep, tol=1e-9) -> np.ndarray:
    """Unitary ``U`` with ``repB.gammas[j] = U^* repA.gammas[j] U`` for every ``j``.

    Solves the linear system ``gammaA_j U = U gammaB_j`` (its solution space is
    one-dimensional by irreducibility), normalizes to a unitary and fixes the
    global phase by making the first largest-modulus entry real positive.
    """
    if repA.d != repB.d or repA.N != repB.N:
        raise ValidationError("representations differ in dimension or size")
    if repA.d % 2 == 1:
        sa, sb = chirality_sign(repA), chirality_sign(repB)
        if sa != sb:
            raise NoIntertwinerError(
                f"chirality mismatch ({sa:+d} vs {sb:+d}); no unitary intertwiner exists")
    N = repA.N
    eye = np.eye(N)
    M = np.zeros((N * N, N * N), dtype=complex)
    for ga, gb in zip(repA.gammas, repB.gammas):
        L = np.kron(ga, eye) - np.kron(eye, gb.T)
        M += L.conj().T @ L
    w, V = np.linalg.eigh(M)
    if w[0] > tol:
        raise NoIntertwinerError(f"intertwining system has no null vector (min eig {w[0]:.2e})")
    U = V[:, 0].reshape(N, N) * np.sqrt(N)
    U = _fix_phase(U.ravel()).reshape(N, N)
    return U


def intertwiner_residual(repA, repB, U) -> float:
    return max(np.abs(U.conj().T @ ga @ U - gb).max()
               for ga, gb in zip(repA.gammas, repB.gammas))


# ---------------------------------------------------------------------------
# antisymmetric canonical form and spin-field term


def _check_antisym(B, tol=1e-13):
    B = np.asarray(B, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValidationError("expected a square matrix")
    if np.abs(B + B.T).max() > tol * max(1.0, np.abs(B).max()):
        raise ValidationError("matrix is not antisymmetric")
    return B


def antisym_canonical(B, rtol=1e-12) -> AntisymCanonical:
    """Orthogonal ``R`` with ``R^T B R = diag(D_1 i sigma_2, ..., D_nu i sigma_2[, 0])``.

    Eigenvectors ``v = a + i b`` of the Hermitian matrix ``iB`` with eigenvalue
    ``D > 0`` give the real pair ``(b, a) * sqrt(2)``.  Blocks are sorted by
    ``D`` descending, zero blocks last; for odd ``d`` the last column spans the
    remaining kernel direction and is signed so that ``det R = +1``.
    """
    B = _check_antisym(B)
    d = B.shape[0]
    nu = d // 2
    w, V = np.linalg.eigh(1j * B)
    scale = max(np.abs(B).max(), 1e-300)
    order = np.argsort(-w, kind="stable")
    cols, Ds = [], []
    for i in order:
        if w[i] <= rtol * scale or len(Ds) == nu:
            break
        v = V[:, i]
        a, b = v.real, v.imag
        cols += [b * np.sqrt(2.0), a * np.sqrt(2.0)]
        Ds.append(w[i])
    # complete to an orthonormal basis with real kernel vectors
    if len(cols) < d:
        Q = np.array(cols).T if cols else np.zeros((d, 0))
        P = np.eye(d) - Q @ Q.T
        u, s, _ = np.linalg.svd(P)
        extra = u[:, : d - len(cols)]
        cols += list(extra.T)
        Ds += [0.0] * (nu - len(Ds))
    R = np.array(cols).T
    # re-orthonormalize against rounding (tiny correction, preserves the pairing)
    U_, _, Vt_ = np.linalg.svd(R)
    R = U_ @ Vt_
    if d % 2 == 1 and np.linalg.det(R) < 0:
        R[:, -1] *= -1.0
    Ds = np.array(Ds, dtype=float)
    return AntisymCanonical(R=R, Ds=Ds, D=block_form(Ds, d))


def block_form(Ds, d: int) -> np.ndarray:
    D = np.zeros((d, d))
    for k, Dk in enumerate(Ds):
        D[2 * k, 2 * k + 1] = Dk
        D[2 * k + 1, 2 * k] = -Dk
    return D


def spin_field_matrix(rep: CliffordRep, B) -> np.ndarray:
    """``F_B = (i/2) sum_{j != k} gamma_j gamma_k B_jk`` (Hermitian)."""
    B = _check_antisym(B)
    if B.shape[0] != rep.d:
        raise ValidationError(f"B is {B.shape[0]}x{B.shape[0]} but rep has d={rep.d}")
    g = rep.gammas
    F = 0.5j * np.einsum("jk,jab,kbc->ac", B, g, g)
    return 0.5 * (F + F.conj().T)


def spin_field_canonical(rep: CliffordRep, B):
    """Unitary ``U`` and ``F_c = i sum_k D_k gamma_{2k-1} gamma_{2k}`` with ``F_B = U^* F_c U``.

    This is the route through the canonical form and the rotation
    intertwiner; the spectrum of ``F_c`` is ``{sum_k +-D_k}``.
    """
    can = antisym_canonical(B)
    rotated = rotate_rep(rep, can.R.T)  # Gamma_b = sum_j gamma_j R_jb
    U = intertwiner(rep, rotated)
    g = rep.gammas
    Fc = np.zeros((rep.N, rep.N), dtype=complex)
    for k, Dk in enumerate(can.Ds):
        Fc += 1j * Dk * g[2 * k] @ g[2 * k + 1]
    return U, Fc, can
