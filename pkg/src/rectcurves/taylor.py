"""Truncated Taylor-series (jet) arithmetic.

A jet of order ``K`` is an array ``c`` of shape ``(K + 1, *batch)`` holding the
normalized Taylor coefficients ``c[k] = f^(k)(t) / k!`` of a function at a
batch of expansion points.  Vector-valued jets carry the coordinate axis last,
``(K + 1, N, n)``.  All operations are exact up to the truncation order, which
is what lets analytic curve families expose derivative jets of any order after
composition, projection and arc-length reparameterization.
"""
from math import factorial

import numpy as np


def variable(t, order):
    """Jet of the identity function expanded at ``t``."""
    t = np.asarray(t, dtype=float)
    c = np.zeros((order + 1,) + t.shape)
    c[0] = t
    if order >= 1:
        c[1] = 1.0
    return c


def constant(x, order):
    x = np.asarray(x, dtype=float)
    c = np.zeros((order + 1,) + x.shape)
    c[0] = x
    return c


def order_of(a):
    return a.shape[0] - 1


def _expand(a, b):
    # Let a scalar jet (K+1, N) multiply a vector jet (K+1, N, n).
    if a.ndim < b.ndim:
        a = a.reshape(a.shape + (1,) * (b.ndim - a.ndim))
    elif b.ndim < a.ndim:
        b = b.reshape(b.shape + (1,) * (a.ndim - b.ndim))
    return a, b


def mul(a, b):
    """Cauchy product of two jets (broadcasting over the batch axes)."""
    a, b = _expand(a, b)
    K = min(order_of(a), order_of(b))
    shape = np.broadcast_shapes(a.shape[1:], b.shape[1:])
    out = np.zeros((K + 1,) + shape)
    for k in range(K + 1):
        acc = a[0] * b[k]
        for j in range(1, k + 1):
            acc = acc + a[j] * b[k - j]
        out[k] = acc
    return out


def dot(a, b):
    """Jet of the Euclidean inner product of two vector jets."""
    return mul(a, b).sum(axis=-1)


def recip(a):
    K = order_of(a)
    q = np.zeros_like(a, dtype=float)
    q[0] = 1.0 / a[0]
    for k in range(1, K + 1):
        acc = a[1] * q[k - 1]
        for j in range(2, k + 1):
            acc = acc + a[j] * q[k - j]
        q[k] = -acc / a[0]
    return q


def div(a, b):
    return mul(a, recip(b))


def sqrt(a):
    K = order_of(a)
    r = np.zeros_like(a, dtype=float)
    r[0] = np.sqrt(a[0])
    for k in range(1, K + 1):
        acc = a[k].copy()
        for j in range(1, k):
            acc = acc - r[j] * r[k - j]
        r[k] = acc / (2.0 * r[0])
    return r


def sincos(a):
    """Return the jets of ``sin(a)`` and ``cos(a)``."""
    K = order_of(a)
    s = np.zeros_like(a, dtype=float)
    c = np.zeros_like(a, dtype=float)
    s[0] = np.sin(a[0])
    c[0] = np.cos(a[0])
    for k in range(1, K + 1):
        ds = 0.0
        dc = 0.0
        for j in range(1, k + 1):
            ds = ds + j * a[j] * c[k - j]
            dc = dc - j * a[j] * s[k - j]
        s[k] = ds / k
        c[k] = dc / k
    return s, c


def derivative(a):
    """Jet of ``f'`` (one order lower)."""
    K = order_of(a)
    scale = np.arange(1, K + 1, dtype=float).reshape((K,) + (1,) * (a.ndim - 1))
    return a[1:] * scale


def integral(a, value):
    """Jet of the antiderivative of ``a`` taking ``value`` at the expansion point."""
    K = order_of(a) + 1
    out = np.zeros((K + 1,) + a.shape[1:])
    out[0] = value
    scale = np.arange(1, K + 1, dtype=float).reshape((K,) + (1,) * (a.ndim - 1))
    out[1:] = a / scale
    return out


def compose(f, g):
    """Jet of ``f(g(x))``.

    ``f`` is expanded at ``g[0]`` (its coefficients are in powers of
    ``y - g[0]``); the result is expanded at the expansion point of ``g``.
    """
    K = min(order_of(f), order_of(g))
    h = g[: K + 1].copy()
    h[0] = 0.0
    out = np.zeros((K + 1,) + f.shape[1:])
    out[0] = f[K]
    for k in range(K - 1, -1, -1):
        out = mul(out, h)
        out[0] = out[0] + f[k]
    return out


def reverse(a):
    """Series reversion of a scalar jet with nonzero first coefficient.

    Returns the jet of the inverse function, expanded at ``a[0]`` and taking
    the value 0 there; callers add the base point.
    """
    K = order_of(a)
    shifted = a.copy()
    shifted[0] = 0.0
    b = np.zeros_like(a, dtype=float)
    b[1] = 1.0 / a[1]
    for k in range(2, K + 1):
        trial = compose(_as_expansion(shifted, k), b[: k + 1])
        b[k] = -trial[k] / a[1]
    return b


def _as_expansion(a, k):
    out = a[: k + 1].copy()
    out[0] = 0.0
    return out


def to_derivatives(a):
    """Convert normalized coefficients into plain derivatives ``f^(k)``."""
    K = order_of(a)
    fac = np.array([factorial(k) for k in range(K + 1)], dtype=float)
    return a * fac.reshape((K + 1,) + (1,) * (a.ndim - 1))


def from_derivatives(d):
    K = order_of(d)
    fac = np.array([factorial(k) for k in range(K + 1)], dtype=float)
    return d / fac.reshape((K + 1,) + (1,) * (d.ndim - 1))
