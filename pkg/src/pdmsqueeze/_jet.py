"""Truncated Taylor arithmetic.

A jet of order N at a set of points is an array ``a`` of shape ``(N+1, *shape)``
with ``a[j] = f^{(j)}(x) / j!``.  All operations truncate to the shortest
operand.  Everything is vectorised over the trailing axes.
"""

import numpy as np


def order(a):
    return a.shape[0] - 1


def constant(c, shape, n):
    out = np.zeros((n + 1,) + tuple(shape))
    out[0] = c
    return out


def mul(a, b):
    n = min(order(a), order(b))
    a = a[: n + 1]
    b = b[: n + 1]
    out = np.zeros(np.broadcast_shapes(a.shape, b.shape))
    for j in range(n + 1):
        out[j:] += a[j] * b[: n + 1 - j]
    return out


def div(a, b):
    n = min(order(a), order(b))
    out = np.zeros(np.broadcast_shapes(a[: n + 1].shape, b[: n + 1].shape))
    b0 = b[0]
    for k in range(n + 1):
        acc = a[k] - np.sum(b[1 : k + 1] * out[k - 1 :: -1][:k], axis=0) if k else a[0]
        out[k] = acc / b0
    return out


def exp(a):
    n = order(a)
    out = np.zeros_like(a, dtype=float)
    out[0] = np.exp(a[0])
    j = np.arange(1, n + 1).reshape((-1,) + (1,) * (a.ndim - 1))
    ja = j * a[1:]
    for k in range(1, n + 1):
        out[k] = np.sum(ja[:k] * out[k - 1 :: -1][:k], axis=0) / k
    return out


def log(a):
    n = order(a)
    out = np.zeros_like(a, dtype=float)
    out[0] = np.log(a[0])
    for k in range(1, n + 1):
        s = 0.0
        for j in range(1, k):
            s = s + j * out[j] * a[k - j]
        out[k] = (a[k] - s / k) / a[0]
    return out


def power(a, p):
    """a**p for real p; needs a[0] != 0."""
    n = order(a)
    out = np.zeros_like(a, dtype=float)
    out[0] = a[0] ** p
    for k in range(1, n + 1):
        s = 0.0
        for j in range(1, k + 1):
            s = s + (p * j - (k - j)) * a[j] * out[k - j]
        out[k] = s / (k * a[0])
    return out


def deriv(a, times=1):
    for _ in range(times):
        n = order(a)
        if n == 0:
            a = np.zeros_like(a)
            continue
        j = np.arange(1, n + 1).reshape((-1,) + (1,) * (a.ndim - 1))
        a = j * a[1:]
    return a


def compose(outer, inner):
    """Jet of outer(inner(x)), given outer's jet at inner(x) and inner's jet at x."""
    n = min(order(outer), order(inner))
    delta = inner[: n + 1].copy()
    delta[0] = 0.0
    out = constant(0.0, outer.shape[1:], n)
    out[0] = outer[n]
    for j in range(n - 1, -1, -1):
        out = mul(out, delta)
        out[0] += outer[j]
    return out


def derivatives(a):
    """Convert normalised coefficients to plain derivatives f^{(j)}."""
    fact = np.cumprod(np.r_[1.0, np.arange(1, order(a) + 1)])
    return a * fact.reshape((-1,) + (1,) * (a.ndim - 1))
