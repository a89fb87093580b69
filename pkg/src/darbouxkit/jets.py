"""Truncated bivariate Taylor arithmetic ("jets").

A :class:`Jet2` stores the scaled Taylor coefficients

    coeffs[i, j] = (1 / (i! j!)) * d^{i+j} f / da^i db^j

of a field about an expansion point, for ``0 <= i <= order_a`` and
``0 <= j <= order_b``.  Trailing array axes, if present, are a batch of
independent expansion points, so a whole grid can be pushed through one
sequence of operations.

Composite operations reproduce the truncated expansion of the exact
composite function, which makes every mixed partial exact up to rounding.
"""

from __future__ import annotations

from math import factorial
from typing import Literal

import numpy as np

from .errors import OrderMismatchError, PoleError, TruncationError

DEFAULT_ORDERS = (7, 3)


class Jet2:
    """Truncated Taylor expansion of a field in two variables."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.ndim < 2:
            raise ValueError("jet coefficients need at least two axes")
        self.coeffs = coeffs

    @property
    def order_a(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def order_b(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def orders(self) -> tuple[int, int]:
        return self.coeffs.shape[0] - 1, self.coeffs.shape[1] - 1

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.coeffs.shape[2:]

    @property
    def value(self):
        """Function value at the expansion point(s)."""
        return self.coeffs[0, 0]

    def partial(self, i: int, k: int):
        return jet_partial(self, i, k)

    def diff(self, i: int = 1, k: int = 0) -> Jet2:
        """Jet of the mixed partial ``d^{i+k} f / da^i db^k``.

        The result loses ``i`` orders in the first variable and ``k`` in the
        second.
        """
        if i < 0 or k < 0:
            raise ValueError("derivative counts must be non-negative")
        if i > self.order_a or k > self.order_b:
            raise TruncationError(
                f"cannot differentiate ({i},{k}) times a jet of orders {self.orders}"
            )
        c = self.coeffs[i:, k:]
        na, nb = c.shape[0], c.shape[1]
        wa = np.array([factorial(p + i) / factorial(p) for p in range(na)])
        wb = np.array([factorial(q + k) / factorial(q) for q in range(nb)])
        w = np.outer(wa, wb).reshape((na, nb) + (1,) * len(self.batch_shape))
        return Jet2(c * w)

    def truncate(self, order_a: int, order_b: int) -> Jet2:
        if order_a > self.order_a or order_b > self.order_b:
            raise TruncationError(
                f"cannot raise jet orders {self.orders} to {(order_a, order_b)}"
            )
        if (order_a, order_b) == self.orders:
            return self
        return Jet2(self.coeffs[: order_a + 1, : order_b + 1])

    def __repr__(self):
        return f"Jet2(orders={self.orders}, batch={self.batch_shape})"

    # operator sugar; scalars are promoted to constant jets
    def __add__(self, other):
        return jet_add(self, other)

    def __radd__(self, other):
        return jet_add(self, other)

    def __sub__(self, other):
        return jet_sub(self, other)

    def __rsub__(self, other):
        return jet_add(-self, other)

    def __mul__(self, other):
        return jet_mul(self, other)

    def __rmul__(self, other):
        return jet_mul(self, other)

    def __truediv__(self, other):
        return jet_div(self, other)

    def __rtruediv__(self, other):
        return jet_div(_promote(other, self), self)

    def __neg__(self):
        return Jet2(-self.coeffs)

    def __pow__(self, n):
        return jet_powi(self, n)


def _promote(x, like: Jet2) -> Jet2:
    if isinstance(x, Jet2):
        return x
    c = np.zeros(like.coeffs.shape)
    c[0, 0] = x
    return Jet2(c)


def _check_orders(f: Jet2, g: Jet2) -> None:
    if f.orders != g.orders:
        raise OrderMismatchError(f"jet orders differ: {f.orders} vs {g.orders}")


def jet_const(c, order_a: int, order_b: int) -> Jet2:
    """Constant field ``c`` (``c`` may be an array to build a batch)."""
    if order_a < 0 or order_b < 0:
        raise ValueError("orders must be non-negative")
    c = np.asarray(c, dtype=float)
    coeffs = np.zeros((order_a + 1, order_b + 1) + c.shape)
    coeffs[0, 0] = c
    return Jet2(coeffs)


def jet_coord(which: Literal["first", "second"] | int, value, order_a: int, order_b: int) -> Jet2:
    """Coordinate field expanded about ``value``."""
    axis = {"first": 0, "second": 1, 0: 0, 1: 1}[which]
    if (order_a, order_b)[axis] < 1:
        raise TruncationError("coordinate jet needs order >= 1 in its own direction")
    j = jet_const(value, order_a, order_b)
    if axis == 0:
        j.coeffs[1, 0] = 1.0
    else:
        j.coeffs[0, 1] = 1.0
    return j


def jet_add(f: Jet2, g) -> Jet2:
    if not isinstance(g, Jet2):
        c = f.coeffs.copy()
        c[0, 0] = c[0, 0] + g
        return Jet2(c)
    _check_orders(f, g)
    return Jet2(f.coeffs + g.coeffs)


def jet_sub(f: Jet2, g) -> Jet2:
    if not isinstance(g, Jet2):
        return jet_add(f, -g)
    _check_orders(f, g)
    return Jet2(f.coeffs - g.coeffs)


def jet_mul(f: Jet2, g) -> Jet2:
    """Truncated Cauchy product."""
    if not isinstance(g, Jet2):
        return Jet2(f.coeffs * g)
    _check_orders(f, g)
    fc, gc = np.broadcast_arrays(f.coeffs, g.coeffs)
    na, nb = fc.shape[0], fc.shape[1]
    out = np.zeros(fc.shape)
    for p in range(na):
        for q in range(nb):
            out[p:, q:] += fc[p, q] * gc[: na - p, : nb - q]
    return Jet2(out)


def jet_div(f: Jet2, g, *, on_pole: Literal["raise", "nan"] = "raise") -> Jet2:
    """Truncated quotient ``f / g``.

    Raises :class:`PoleError` when the value of ``g`` is exactly zero.  With
    ``on_pole="nan"`` the offending batch entries become NaN instead, which
    lets a grid sampler keep the rest of the batch.
    """
    if not isinstance(g, Jet2):
        if g == 0:
            raise PoleError("division by a zero constant")
        return Jet2(f.coeffs / g)
    _check_orders(f, g)
    fc, gc = np.broadcast_arrays(f.coeffs, g.coeffs)
    g00 = gc[0, 0]
    zero = g00 == 0
    if np.any(zero):
        if on_pole == "raise":
            raise PoleError("divisor vanishes at the expansion point")
        g00 = np.where(zero, np.nan, g00)
    inv = 1.0 / g00
    na, nb = fc.shape[0], fc.shape[1]
    h = np.zeros(fc.shape)
    for i in range(na):
        for j in range(nb):
            acc = np.sum(gc[: i + 1, : j + 1] * h[i::-1, j::-1], axis=(0, 1))
            h[i, j] = (fc[i, j] - acc) * inv
    return Jet2(h)


def jet_powi(f: Jet2, n: int) -> Jet2:
    """Integer power; negative exponents go through :func:`jet_div`."""
    if int(n) != n:
        raise TypeError("jet_powi needs an integer exponent")
    n = int(n)
    if n < 0:
        return jet_div(_promote(1.0, f), jet_powi(f, -n))
    result = _promote(1.0, f)
    base = f
    while n:
        if n & 1:
            result = jet_mul(result, base)
        n >>= 1
        if n:
            base = jet_mul(base, base)
    return result


def jet_exp(f: Jet2) -> Jet2:
    """``exp`` of a jet, from the recurrence ``h_a = h f_a`` (and ``h_b = h f_b``)."""
    fc = f.coeffs
    na, nb = fc.shape[0], fc.shape[1]
    h = np.zeros(fc.shape)
    h[0, 0] = np.exp(fc[0, 0])
    for j in range(1, nb):
        acc = sum(q * fc[0, q] * h[0, j - q] for q in range(1, j + 1))
        h[0, j] = acc / j
    for i in range(1, na):
        for j in range(nb):
            acc = 0.0
            for p in range(1, i + 1):
                acc = acc + p * np.sum(fc[p, : j + 1] * h[i - p, j::-1], axis=0)
            h[i, j] = acc / i
    return Jet2(h)


def jet_partial(j: Jet2, i: int, k: int):
    """Raw mixed partial ``d^{i+k} f / da^i db^k`` at the expansion point."""
    if i < 0 or k < 0 or i > j.order_a or k > j.order_b:
        raise TruncationError(f"partial ({i},{k}) outside jet orders {j.orders}")
    return factorial(i) * factorial(k) * j.coeffs[i, k]
