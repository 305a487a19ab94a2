"""Truncated second-order Taylor arithmetic ("jets") on coordinates.

A :class:`Jet` carries the value of a field together with its first and
second partial derivatives with respect to the ``d`` spatial coordinates.
Values may have arbitrary shape ``S``; the derivative arrays then have shapes
``S + (d,)`` and ``S + (d, d)``.  Leading value axes are free for batching over
points, and by convention the *last* value axis is the component axis
(spinor index or vector index) whenever a field is not scalar.

Derivatives are propagated exactly (to rounding) by the product and chain
rules; no finite differences are involved.  The derivative order can be
truncated: ``hess=None`` means second derivatives are not tracked, and
``grad=None`` means only values are tracked.  Mixed-order operations return
the lower order.
"""

from __future__ import annotations

import numpy as np

__all__ = ["Jet", "variables", "stack", "as_jet"]


def _add(a, b):
    if a is None or b is None:
        return None
    return a + b


def _col(a, k):
    """Append ``k`` singleton axes to a value array so it broadcasts against derivatives."""
    return a.reshape(a.shape + (1,) * k)


class Jet:
    __slots__ = ("val", "grad", "hess")

    __array_priority__ = 100  # so ndarray * Jet dispatches to Jet.__rmul__

    def __init__(self, val, grad=None, hess=None):
        self.val = np.asarray(val)
        self.grad = grad
        self.hess = hess if grad is not None else None

    # -- metadata ---------------------------------------------------------
    @property
    def order(self) -> int:
        if self.grad is None:
            return 0
        return 1 if self.hess is None else 2

    @property
    def shape(self):
        return self.val.shape

    @property
    def dim(self):
        return None if self.grad is None else self.grad.shape[-1]

    def __repr__(self):
        return f"Jet(shape={self.shape}, order={self.order})"

    # -- constants --------------------------------------------------------
    def _lift(self, c):
        """Turn a constant into a jet with zero derivatives, broadcast-compatible with self."""
        c = np.asarray(c)
        if self.grad is None:
            return Jet(c)
        d = self.dim
        g = np.zeros(c.shape + (d,), dtype=c.dtype if np.iscomplexobj(c) else float)
        h = None if self.hess is None else np.zeros(c.shape + (d, d), dtype=g.dtype)
        return Jet(c, g, h)

    # -- arithmetic -------------------------------------------------------
    def __neg__(self):
        return Jet(-self.val, None if self.grad is None else -self.grad,
                   None if self.hess is None else -self.hess)

    def __add__(self, other):
        if not isinstance(other, Jet):
            other = np.asarray(other)
            val = self.val + other
            shp = val.shape
            g = h = None
            if self.grad is not None:
                g = np.broadcast_to(self.grad, shp + self.grad.shape[-1:])
                if self.hess is not None:
                    h = np.broadcast_to(self.hess, shp + self.hess.shape[-2:])
            return Jet(val, g, h)
        val = self.val + other.val
        shp = val.shape
        g = _add(self.grad, other.grad)
        h = _add(self.hess, other.hess)
        if g is not None and g.shape[:-1] != shp:
            g = np.broadcast_to(g, shp + g.shape[-1:])
        if h is not None and h.shape[:-2] != shp:
            h = np.broadcast_to(h, shp + h.shape[-2:])
        return Jet(val, g, h if g is not None else None)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            c = np.asarray(other)
            g = None if self.grad is None else self.grad * _col(c, 1)
            h = None if self.hess is None else self.hess * _col(c, 2)
            return Jet(self.val * c, g, h)
        u, v = self, other
        val = u.val * v.val
        if u.grad is None or v.grad is None:
            return Jet(val)
        g = u.grad * _col(v.val, 1) + _col(u.val, 1) * v.grad
        if u.hess is None or v.hess is None:
            return Jet(val, g)
        gu, gv = u.grad, v.grad
        cross = gu[..., :, None] * gv[..., None, :]
        h = (u.hess * _col(v.val, 2) + _col(u.val, 2) * v.hess
             + cross + np.swapaxes(cross, -1, -2))
        return Jet(val, g, h)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self * (1.0 / np.asarray(other))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, p):
        p = float(p)
        u = self.val
        return self.apply(u ** p, p * u ** (p - 1), p * (p - 1) * u ** (p - 2))

    # -- elementwise functions -------------------------------------------
    def apply(self, f0, f1, f2=None):
        """Chain rule for an elementwise function given its value and derivatives at ``val``."""
        if self.grad is None:
            return Jet(f0)
        g = _col(np.asarray(f1), 1) * self.grad
        if self.hess is None:
            return Jet(f0, g)
        gg = self.grad[..., :, None] * self.grad[..., None, :]
        h = _col(np.asarray(f2), 2) * gg + _col(np.asarray(f1), 2) * self.hess
        return Jet(f0, g, h)

    def reciprocal(self):
        u = self.val
        inv = 1.0 / u
        return self.apply(inv, -inv * inv, 2.0 * inv * inv * inv)

    def sqrt(self):
        s = np.sqrt(self.val)
        return self.apply(s, 0.5 / s, -0.25 / (s * self.val))

    def exp(self):
        e = np.exp(self.val)
        return self.apply(e, e, e)

    def arctan(self):
        u = self.val
        q = 1.0 / (1.0 + u * u)
        return self.apply(np.arctan(u), q, -2.0 * u * q * q)

    def conj(self):
        return Jet(np.conj(self.val), None if self.grad is None else np.conj(self.grad),
                   None if self.hess is None else np.conj(self.hess))

    @property
    def real(self):
        return Jet(self.val.real, None if self.grad is None else self.grad.real,
                   None if self.hess is None else self.hess.real)

    @property
    def imag(self):
        return Jet(self.val.imag, None if self.grad is None else self.grad.imag,
                   None if self.hess is None else self.hess.imag)

    # -- component handling ----------------------------------------------
    def comp(self, k):
        """Component ``k`` of the last value axis."""
        return Jet(self.val[..., k],
                   None if self.grad is None else self.grad[..., k, :],
                   None if self.hess is None else self.hess[..., k, :, :])

    def expand(self):
        """Insert a trailing singleton value axis (scalar field -> 1-component field)."""
        return Jet(self.val[..., None],
                   None if self.grad is None else self.grad[..., None, :],
                   None if self.hess is None else self.hess[..., None, :, :])

    def sum(self):
        """Sum over the last value axis."""
        return Jet(self.val.sum(-1),
                   None if self.grad is None else self.grad.sum(-2),
                   None if self.hess is None else self.hess.sum(-3))

    def matvec(self, M):
        """Apply a constant matrix to the last value axis."""
        M = np.asarray(M)
        val = np.einsum("ij,...j->...i", M, self.val)
        g = None if self.grad is None else np.einsum("ij,...jk->...ik", M, self.grad)
        h = None if self.hess is None else np.einsum("ij,...jkl->...ikl", M, self.hess)
        return Jet(val, g, h)

    def partial(self, j):
        """The jet of the partial derivative along coordinate ``j`` (order drops by one)."""
        if self.grad is None:
            raise ValueError("jet carries no derivatives")
        return Jet(self.grad[..., j], None if self.hess is None else self.hess[..., j, :])

    def truncate(self, order):
        if order >= self.order:
            return self
        if order == 0:
            return Jet(self.val)
        return Jet(self.val, self.grad)

    def laplacian(self):
        if self.hess is None:
            raise ValueError("second derivatives not tracked")
        return np.trace(self.hess, axis1=-2, axis2=-1)


def as_jet(c, like: Jet) -> Jet:
    return c if isinstance(c, Jet) else like._lift(c)


def variables(x, order: int = 2) -> Jet:
    """Coordinate jet for points ``x`` of shape ``(..., d)``.

    Component ``k`` is the coordinate function ``x_k``; its gradient is ``e_k``.
    """
    x = np.asarray(x, dtype=float)
    d = x.shape[-1]
    if order == 0:
        return Jet(x)
    g = np.broadcast_to(np.eye(d), x.shape + (d,)).copy()
    if order == 1:
        return Jet(x, g)
    return Jet(x, g, np.zeros(x.shape + (d, d)))


def stack(jets) -> Jet:
    """Stack jets with equal shapes along a new last value axis."""
    jets = list(jets)
    order = min(j.order for j in jets)
    jets = [j.truncate(order) for j in jets]
    shp = np.broadcast_shapes(*(j.shape for j in jets))
    val = np.stack([np.broadcast_to(j.val, shp) for j in jets], axis=-1)
    if order == 0:
        return Jet(val)
    d = jets[0].dim
    g = np.stack([np.broadcast_to(j.grad, shp + (d,)) for j in jets], axis=-2)
    if order == 1:
        return Jet(val, g)
    h = np.stack([np.broadcast_to(j.hess, shp + (d, d)) for j in jets], axis=-3)
    return Jet(val, g, h)
