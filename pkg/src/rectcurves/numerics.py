"""Finite-difference stencils and small grid utilities shared by all modules."""
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.integrate import cumulative_simpson

FD_ACCURACY = 4


@lru_cache(maxsize=None)
def _rational_weights(offsets, deriv):
    """Fornberg's recursion in exact rational arithmetic."""
    x = [Fraction(o) for o in offsets]
    n = len(x)
    c = [[Fraction(0)] * (deriv + 1) for _ in range(n)]
    c1 = Fraction(1)
    c4 = x[0]
    c[0][0] = Fraction(1)
    for i in range(1, n):
        mn = min(i, deriv)
        c2 = Fraction(1)
        c5 = c4
        c4 = x[i]
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2
            for k in range(mn, 0, -1):
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3
            c[j][0] = c4 * c[j][0] / c3
        c1 = c2
    return tuple(row[deriv] for row in c)


@lru_cache(maxsize=None)
def fornberg_weights(offsets, deriv, dtype=np.float64):
    """Finite-difference weights for derivative ``deriv`` on integer ``offsets``.

    The weights are exact rationals rounded once to ``dtype``, so extended
    precision inputs keep their extra digits.
    """
    dtype = np.dtype(dtype).type
    w = np.array([dtype(q.numerator) / dtype(q.denominator)
                  for q in _rational_weights(tuple(offsets), deriv)], dtype=dtype)
    w.setflags(write=False)
    return w


def _float_array(values):
    v = np.asarray(values)
    return v if np.issubdtype(v.dtype, np.floating) else v.astype(float)


def stencil_sizes(deriv, accuracy=FD_ACCURACY):
    """Return (central width, one-sided width) for a derivative order.

    One-sided stencils carry one point beyond the minimum for the requested
    order; near the ends truncation and rounding otherwise dominate the
    interior error by an order of magnitude.
    """
    half = (deriv + 1) // 2 - 1 + (accuracy + 1) // 2
    return 2 * half + 1, deriv + accuracy + 1


def fd_derivative(values, h, deriv=1, accuracy=FD_ACCURACY):
    """Derivative of uniformly sampled data along axis 0.

    Central stencils in the interior, one-sided stencils of the same formal
    accuracy near the ends.  The arithmetic runs in the dtype of ``values``
    (float64 or ``np.longdouble``).
    """
    v = _float_array(values)
    N = v.shape[0]
    central, onesided = stencil_sizes(deriv, accuracy)
    if N < central:
        raise ValueError(f"need at least {central} samples for derivative order {deriv}")
    half = central // 2
    out = np.empty_like(v)
    w = fornberg_weights(tuple(range(-half, half + 1)), deriv, v.dtype)
    acc = np.zeros_like(v[half:N - half])
    for k, wk in enumerate(w):
        if wk != 0.0:
            acc = acc + wk * v[k:N - central + 1 + k]
    out[half:N - half] = acc
    width = min(onesided, N)
    for i in list(range(half)) + list(range(N - half, N)):
        start = 0 if i < half else N - width
        offs = tuple(j - i for j in range(start, start + width))
        wi = fornberg_weights(offs, deriv, v.dtype)
        out[i] = np.tensordot(wi, v[start:start + width], axes=(0, 0))
    return out / h**deriv


def midpoints(values):
    """Values at cell midpoints of a uniform grid by cubic interpolation."""
    v = np.asarray(values, dtype=float)
    N = v.shape[0]
    if N < 4:
        return 0.5 * (v[:-1] + v[1:])
    out = np.empty((N - 1,) + v.shape[1:])
    out[1:N - 2] = (-v[:N - 3] + 9.0 * v[1:N - 2] + 9.0 * v[2:N - 1] - v[3:]) / 16.0
    out[0] = (5.0 * v[0] + 15.0 * v[1] - 5.0 * v[2] + v[3]) / 16.0
    out[-1] = (5.0 * v[-1] + 15.0 * v[-2] - 5.0 * v[-3] + v[-4]) / 16.0
    return out


def cumulative_integral(values, h):
    """Cumulative integral of uniformly sampled data, starting at 0."""
    v = np.asarray(values, dtype=float)
    return cumulative_simpson(v, dx=h, axis=0, initial=0.0)


def is_uniform(s, rtol=1e-12):
    s = np.asarray(s, dtype=float)
    if s.size < 2:
        return False
    d = np.diff(s)
    h = (s[-1] - s[0]) / (s.size - 1)
    return bool(h > 0 and np.all(np.abs(d - h) <= rtol * max(abs(h), np.max(np.abs(s)))))


def grid_step(s):
    s = np.asarray(s, dtype=float)
    return (s[-1] - s[0]) / (s.size - 1)
