"""Second-order forward-mode jets.

A :class:`Jet` carries a value, its gradient and its Hessian with respect to
``n`` seed variables.  Arithmetic and the elementary functions below propagate
all three exactly (up to floating point), so any field written with them
yields exact first and second partial derivatives.

The elementary functions accept plain floats too, so the same user function
can be evaluated on floats (for finite-difference oracles) or on jets.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np


class Jet:
    __slots__ = ("val", "grad", "hess")

    def __init__(self, val: float, grad: np.ndarray, hess: np.ndarray):
        self.val = float(val)
        self.grad = grad
        self.hess = hess

    @classmethod
    def variable(cls, value: float, index: int, n: int) -> "Jet":
        grad = np.zeros(n)
        grad[index] = 1.0
        return cls(value, grad, np.zeros((n, n)))

    @classmethod
    def constant(cls, value: float, n: int) -> "Jet":
        return cls(value, np.zeros(n), np.zeros((n, n)))

    @property
    def n(self) -> int:
        return self.grad.shape[0]

    def __repr__(self):
        return f"Jet({self.val!r}, grad={self.grad.tolist()!r})"

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.val + other.val, self.grad + other.grad, self.hess + other.hess)
        return Jet(self.val + other, self.grad, self.hess)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.val, -self.grad, -self.hess)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if isinstance(other, Jet):
            return Jet(self.val - other.val, self.grad - other.grad, self.hess - other.hess)
        return Jet(self.val - other, self.grad, self.hess)

    def __rsub__(self, other):
        return Jet(other - self.val, -self.grad, -self.hess)

    def __mul__(self, other):
        if isinstance(other, Jet):
            cross = np.outer(self.grad, other.grad)
            return Jet(
                self.val * other.val,
                self.val * other.grad + other.val * self.grad,
                self.val * other.hess + other.val * self.hess + cross + cross.T,
            )
        return Jet(self.val * other, self.grad * other, self.hess * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * _reciprocal(other)
        return Jet(self.val / other, self.grad / other, self.hess / other)

    def __rtruediv__(self, other):
        return _reciprocal(self) * other

    def __pow__(self, exponent):
        if isinstance(exponent, Jet):
            return exp(exponent * log(self))
        p = exponent
        if isinstance(p, int) or float(p).is_integer():
            p = int(p)
            if p == 0:
                return Jet.constant(1.0, self.n)
            if p == 1:
                return self
            if p < 0:
                return _reciprocal(self ** (-p))
            v = self.val
            return _chain(self, v**p, p * v ** (p - 1), p * (p - 1) * v ** (p - 2) if p >= 2 else 0.0)
        v = self.val
        return _chain(self, v**p, p * v ** (p - 1), p * (p - 1) * v ** (p - 2))

    def __rpow__(self, base):
        return exp(self * math.log(base))


def _chain(x: Jet, f0: float, f1: float, f2: float) -> Jet:
    """Compose a scalar function with value f0, f' = f1, f'' = f2 at x.val."""
    return Jet(f0, f1 * x.grad, f1 * x.hess + f2 * np.outer(x.grad, x.grad))


def _reciprocal(x: Jet) -> Jet:
    v = x.val
    return _chain(x, 1.0 / v, -1.0 / v**2, 2.0 / v**3)


def exp(x):
    if isinstance(x, Jet):
        e = math.exp(x.val)
        return _chain(x, e, e, e)
    return math.exp(x)


def log(x):
    if isinstance(x, Jet):
        v = x.val
        return _chain(x, math.log(v), 1.0 / v, -1.0 / v**2)
    return math.log(x)


def sqrt(x):
    if isinstance(x, Jet):
        r = math.sqrt(x.val)
        return _chain(x, r, 0.5 / r, -0.25 / (r * x.val))
    return math.sqrt(x)


def sin(x):
    if isinstance(x, Jet):
        s, c = math.sin(x.val), math.cos(x.val)
        return _chain(x, s, c, -s)
    return math.sin(x)


def cos(x):
    if isinstance(x, Jet):
        s, c = math.sin(x.val), math.cos(x.val)
        return _chain(x, c, -s, -c)
    return math.cos(x)


def sinh(x):
    if isinstance(x, Jet):
        s, c = math.sinh(x.val), math.cosh(x.val)
        return _chain(x, s, c, s)
    return math.sinh(x)


def cosh(x):
    if isinstance(x, Jet):
        s, c = math.sinh(x.val), math.cosh(x.val)
        return _chain(x, c, s, c)
    return math.cosh(x)


def antiderivative(f: Callable, lower: float = 0.0) -> Callable:
    """Return F with F(t) = int_lower^t f, jet-aware in t.

    The value is obtained by adaptive quadrature; F' = f and F'' = f' are
    exact, which is all that curvature computations ever look at.
    """
    from scipy.integrate import quad

    def F(t):
        tv = t.val if isinstance(t, Jet) else float(t)
        value = quad(lambda u: float(f(u)), lower, tv, epsabs=1e-13, epsrel=1e-13)[0]
        if not isinstance(t, Jet):
            return value
        local = f(Jet.variable(tv, 0, 1))
        return _chain(t, value, local.val, local.grad[0])

    return F


# evaluation helpers ----------------------------------------------------

def seed(point: Sequence[float]) -> list[Jet]:
    n = len(point)
    return [Jet.variable(float(v), i, n) for i, v in enumerate(point)]


def unpack(obj, n: int):
    """Split a (nested) structure of jets/numbers into value, gradient, Hessian arrays.

    Output shapes are ``S``, ``S + (n,)`` and ``S + (n, n)`` for an input of shape ``S``.
    """
    arr = np.asarray(obj, dtype=object)
    shape = arr.shape
    flat = arr.reshape(-1)
    val = np.empty(flat.shape[0])
    grad = np.zeros((flat.shape[0], n))
    hess = np.zeros((flat.shape[0], n, n))
    for k, item in enumerate(flat):
        if isinstance(item, Jet):
            val[k] = item.val
            grad[k] = item.grad
            hess[k] = item.hess
        else:
            val[k] = float(item)
    return val.reshape(shape), grad.reshape(shape + (n,)), hess.reshape(shape + (n, n))


def jet_eval(fn: Callable, point: Sequence[float]):
    """Evaluate ``fn`` on seeded jets at ``point``; return (value, gradient, Hessian) arrays."""
    return unpack(fn(seed(point)), len(point))
