"""Regularized incomplete beta function and sphere/ball measures.

The incomplete beta is evaluated with the modified Lentz algorithm on the
standard continued fraction, vectorized over numpy arrays.  Callers that know
``1 - x`` more accurately than ``x`` (cap fractions near the poles) can pass it
as ``xc``.
"""

import math

import numpy as np

_TINY = 1e-300
_EPS = 1e-15
_MAX_ITER = 400


def _lentz(a, b, x):
    """Continued fraction for I_x(a, b), elementwise; x should satisfy
    x < (a + 1) / (a + b + 2) for fast convergence."""
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = np.ones_like(x)
    d = 1.0 - qab * x / qap
    d = np.where(np.abs(d) < _TINY, _TINY, d)
    d = 1.0 / d
    h = d.copy()
    active = np.ones(x.shape, dtype=bool)
    for m in range(1, _MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        h = np.where(active, h * d * c, h)
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = np.where(np.abs(d) < _TINY, _TINY, d)
        c = 1.0 + aa / c
        c = np.where(np.abs(c) < _TINY, _TINY, c)
        d = 1.0 / d
        delta = d * c
        h = np.where(active, h * delta, h)
        active &= np.abs(delta - 1.0) > _EPS
        if not active.any():
            return h
    raise ArithmeticError("incomplete beta continued fraction did not converge")


def betainc(a, b, x, xc=None):
    """Regularized incomplete beta I_x(a, b) for scalar a, b > 0.

    ``x`` may be an array.  ``xc`` optionally supplies ``1 - x`` computed
    without cancellation.
    """
    if a <= 0 or b <= 0:
        raise ValueError("betainc requires a, b > 0")
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    xc = 1.0 - x if xc is None else np.atleast_1d(np.asarray(xc, dtype=float))
    if np.any((x < 0) | (x > 1)):
        raise ValueError("betainc requires 0 <= x <= 1")

    out = np.empty_like(x)
    lo = x <= 0.0
    hi = xc <= 0.0
    out[lo] = 0.0
    out[hi] = 1.0
    mid = ~(lo | hi)
    if mid.any():
        xm, xcm = x[mid], xc[mid]
        lbeta = math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)
        front = np.exp(a * np.log(xm) + b * np.log(xcm) - lbeta)
        direct = xm < (a + 1.0) / (a + b + 2.0)
        res = np.empty_like(xm)
        if direct.any():
            res[direct] = front[direct] * _lentz(a, b, xm[direct]) / a
        flip = ~direct
        if flip.any():
            res[flip] = 1.0 - front[flip] * _lentz(b, a, xcm[flip]) / b
        out[mid] = res
    return float(out[0]) if scalar else out


def sphere_area(n):
    """Surface area of the unit sphere S^{n-1} in R^n."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


def ball_volume(n, radius=1.0):
    return math.pi ** (n / 2.0) / math.gamma(n / 2.0 + 1.0) * radius**n
