"""Vectorized adaptive Gauss-Kronrod (G10/K21) integration.

Many independent integrals are refined side by side: every interval carries
the index of the integral ("owner") it belongs to, the integrand is called
once per refinement sweep on all fresh intervals, and each owner stops
refining as soon as its own error estimate meets its tolerance.  Per-owner
results therefore do not depend on which other integrals share the batch.
"""

import numpy as np

from .errors import QuadratureFailure

# QUADPACK qk21 abscissae and weights (non-negative half, centre last).
_XGK = np.array([
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208980223743,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_wg_half = np.zeros(11)
_wg_half[1:10:2] = _WG
GAUSS_WEIGHTS = np.concatenate([_wg_half[:-1], _wg_half[::-1]])

_EPMACH = np.finfo(float).eps
_UFLOW = np.finfo(float).tiny
# Contributions below this are treated as exact zeros.
_TINY_ABS = 1e-290

# Bounds the number of integrand points evaluated in one call.
CHUNK_INTERVALS = 16384


def _rule(func, a, b, owner):
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = center[:, None] + half[:, None] * NODES[None, :]
    fv = np.asarray(func(x, owner), dtype=float)
    if fv.shape != x.shape:
        raise ValueError("integrand must return an array shaped like its input")
    if not np.all(np.isfinite(fv)):
        bad = np.unique(owner[~np.all(np.isfinite(fv), axis=1)])
        raise QuadratureFailure(
            "integrand returned non-finite values", owners=bad.tolist())
    # Row sums rather than matrix products: BLAS rounding depends on the
    # number of rows, which would make results depend on the batch.
    resk = (fv * KRONROD_WEIGHTS).sum(axis=1)
    resg = (fv * GAUSS_WEIGHTS).sum(axis=1)
    reskh = 0.5 * resk
    resabs = (np.abs(fv) * KRONROD_WEIGHTS).sum(axis=1)
    resasc = (np.abs(fv - reskh[:, None]) * KRONROD_WEIGHTS).sum(axis=1)
    ah = np.abs(half)
    value = resk * half
    err = np.abs((resk - resg) * half)
    resabs *= ah
    resasc *= ah
    scaled = (resasc != 0) & (err != 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(scaled, 200.0 * err / np.where(scaled, resasc, 1.0), 0.0)
    err = np.where(scaled, resasc * np.minimum(1.0, ratio**1.5), err)
    floor = resabs > _UFLOW / (50.0 * _EPMACH)
    err = np.where(floor, np.maximum(50.0 * _EPMACH * resabs, err), err)
    return value, err, resabs


def _evaluate(func, a, b, owner):
    if a.size <= CHUNK_INTERVALS:
        return _rule(func, a, b, owner)
    parts = [
        _rule(func, a[i:i + CHUNK_INTERVALS], b[i:i + CHUNK_INTERVALS],
              owner[i:i + CHUNK_INTERVALS])
        for i in range(0, a.size, CHUNK_INTERVALS)
    ]
    return tuple(np.concatenate(p) for p in zip(*parts))


def integrate_batch(func, a, b, owner, n_owners, rtol=1e-10, atol=0.0,
                    max_intervals=1000):
    """Integrate ``n_owners`` integrals given as unions of initial intervals.

    ``func(x, owner)`` receives an ``(m, 21)`` array of abscissae and the
    length-``m`` owner index of each row and must return values of the same
    shape.  ``atol`` may be a scalar or one value per owner.  Returns
    ``(values, errors)``, one entry per owner.
    """
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    owner = np.asarray(owner, dtype=np.intp).ravel()
    atol = np.maximum(np.broadcast_to(np.asarray(atol, dtype=float), (n_owners,)), _TINY_ABS)

    val, err, rabs = _evaluate(func, a, b, owner)
    while True:
        total = np.bincount(owner, val, minlength=n_owners)
        total_err = np.bincount(owner, err, minlength=n_owners)
        total_abs = np.bincount(owner, rabs, minlength=n_owners)
        count = np.bincount(owner, minlength=n_owners)
        tol = np.maximum(atol, rtol * np.abs(total))
        tol = np.maximum(tol, 100.0 * _EPMACH * total_abs)
        unconverged = total_err > tol
        if not unconverged.any():
            return total, total_err

        share = tol / np.maximum(count, 1)
        split = unconverged[owner] & (err > share[owner])
        # Intervals already at roundoff width cannot be bisected further.
        width_ok = np.abs(b - a) > 64.0 * _EPMACH * np.maximum(np.abs(a), np.abs(b))
        split &= width_ok
        stuck = unconverged & (np.bincount(owner, split, minlength=n_owners) == 0)
        if stuck.any():
            # Accept the roundoff-limited estimate for these owners.
            unconverged &= ~stuck
            split &= unconverged[owner]
            if not split.any():
                return total, total_err
        over = unconverged & (count + np.bincount(owner, split, minlength=n_owners)
                              > max_intervals)
        if over.any():
            raise QuadratureFailure(
                f"tolerance not reached within {max_intervals} subintervals "
                f"for integral(s) {np.flatnonzero(over).tolist()}",
                owners=np.flatnonzero(over).tolist())

        keep = ~split
        sa, sb, so = a[split], b[split], owner[split]
        mid = 0.5 * (sa + sb)
        na = np.concatenate([sa, mid])
        nb = np.concatenate([mid, sb])
        no = np.concatenate([so, so])
        nval, nerr, nabs = _evaluate(func, na, nb, no)
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        owner = np.concatenate([owner[keep], no])
        val = np.concatenate([val[keep], nval])
        err = np.concatenate([err[keep], nerr])
        rabs = np.concatenate([rabs[keep], nabs])


def intervals_from_breaks(breaks_per_owner):
    """Flatten per-owner sorted breakpoint lists into interval arrays."""
    a, b, owner = [], [], []
    for i, br in enumerate(breaks_per_owner):
        br = np.asarray(br, dtype=float)
        a.append(br[:-1])
        b.append(br[1:])
        owner.append(np.full(br.size - 1, i, dtype=np.intp))
    if not a:
        return np.empty(0), np.empty(0), np.empty(0, dtype=np.intp)
    return np.concatenate(a), np.concatenate(b), np.concatenate(owner)


def quad(func, lo, hi, points=(), rtol=1e-10, atol=0.0, max_intervals=1000):
    """Adaptive integral of a vectorized scalar function over [lo, hi]."""
    br = sorted({lo, hi, *[p for p in points if lo < p < hi]})
    a, b, owner = intervals_from_breaks([br])
    val, err = integrate_batch(lambda x, _o: func(x), a, b, owner, 1,
                               rtol=rtol, atol=atol, max_intervals=max_intervals)
    return float(val[0]), float(err[0])
