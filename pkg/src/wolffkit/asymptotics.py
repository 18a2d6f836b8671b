"""Exponent iteration of the Liouville argument and decay-rate estimation."""

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import exponents, fast_rate, nearly_equal
from .errors import IllConditioned, InvalidParameters
from .quadrature import quad

MAX_ITER = 200
CONVERGENCE_RTOL = 1e-14
CONDITION_LIMIT = 1e8
DEFAULT_FIT_WINDOW = (1e3, 1e9)
DEFAULT_FIT_SAMPLES = 40


class Verdict(enum.Enum):
    DIVERGES_NEGATIVE = "DivergesNegative"
    CONVERGES_TO = "ConvergesTo"
    STALLS = "Stalls"


@dataclass(frozen=True)
class IterationTrace:
    a: tuple
    b: tuple
    verdict: Verdict
    index: Optional[int]  # first negative index, or where the iteration stopped
    limit: Optional[float]
    closed_form_check: float

    @property
    def closed_form_ok(self):
        scale = 1.0 + max((abs(v) for v in self.a if math.isfinite(v)), default=0.0)
        return self.closed_form_check <= 1e-10 * scale


def closed_form_a(params, a_start, j):
    """a_j from the summed form of the affine recursion."""
    ex = exponents(params)
    g1sq = (params.gamma - 1.0) ** 2
    r0 = ex.iter_ratio
    if nearly_equal(r0, 1.0):
        return a_start - j * ex.eta0 / g1sq
    return r0**j * (a_start - ex.q0) + ex.q0


def iterate_liouville(params, a_start=None, max_iter=MAX_ITER, stop=True):
    """Run b_k = (p a_k - s2 - bg)/(g-1), a_{k+1} = (q b_k - s1 - bg)/(g-1).

    ``a_start`` defaults to the fast rate a0.  With ``stop=False`` all
    ``max_iter`` steps are taken regardless of sign changes or convergence.
    """
    if max_iter < 1:
        raise InvalidParameters("max_iter must be >= 1")
    g1 = params.gamma - 1.0
    bg = params.bg
    a_val = fast_rate(params) if a_start is None else float(a_start)
    a_seq, b_seq = [a_val], []
    verdict, index, limit = Verdict.STALLS, None, None
    for k in range(max_iter):
        b_val = (params.p * a_val - params.sigma2 - bg) / g1
        b_seq.append(b_val)
        if stop and (a_val < 0 or b_val < 0):
            verdict, index = Verdict.DIVERGES_NEGATIVE, k
            break
        nxt = (params.q * b_val - params.sigma1 - bg) / g1
        if not math.isfinite(nxt):
            index = k
            break
        a_seq.append(nxt)
        if stop and abs(nxt - a_val) < CONVERGENCE_RTOL * (1.0 + abs(a_val)):
            verdict, index, limit = Verdict.CONVERGES_TO, k + 1, nxt
            break
        a_val = nxt
    else:
        index = max_iter

    start = a_seq[0]
    dev = 0.0
    for j, a_j in enumerate(a_seq):
        ref = closed_form_a(params, start, j)
        if math.isfinite(ref):
            dev = max(dev, abs(a_j - ref))
    return IterationTrace(tuple(a_seq), tuple(b_seq), verdict, index, limit, dev)


@dataclass(frozen=True)
class RateFit:
    """Fit of v ~ C r^-theta (log r)^kappa; ``c`` is log C."""

    theta: float
    kappa: float
    c: float
    residual: float
    window: tuple
    condition: float


def fit_rate(samples, allow_log=False):
    """Least squares of log v on (1, -log r[, log log r]) over tail samples."""
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 8:
        raise InvalidParameters("fit_rate needs at least 8 (r, v) samples")
    r, v = data[:, 0], data[:, 1]
    if np.any(np.diff(r) <= 0):
        raise InvalidParameters("radii must be strictly increasing")
    if r[0] < 10:
        raise InvalidParameters("fit window must start at r >= 10")
    if np.any(v <= 0):
        raise InvalidParameters("values must be positive")
    lr = np.log(r)
    cols = [np.ones_like(lr), -lr]
    if allow_log:
        cols.append(np.log(lr))
    X = np.stack(cols, axis=1)
    cond = float(np.linalg.cond(X))
    if cond > CONDITION_LIMIT:
        raise IllConditioned(f"regression condition number {cond:.3g} exceeds {CONDITION_LIMIT:g}")
    y = np.log(v)
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ coef
    return RateFit(theta=float(coef[1]), kappa=float(coef[2]) if allow_log else 0.0,
                   c=float(coef[0]), residual=float(np.sqrt(np.mean(resid**2))),
                   window=(float(r[0]), float(r[-1])), condition=cond)


def fit_window(lo=DEFAULT_FIT_WINDOW[0], hi=DEFAULT_FIT_WINDOW[1], count=DEFAULT_FIT_SAMPLES):
    return np.logspace(math.log10(lo), math.log10(hi), count)


def lambda_limit_value(n, beta, gamma, lam):
    """Limit of the log-corrected tail integral: (g-1)/(n-bg) * lam^-a0."""
    a0 = (n - beta * gamma) / (gamma - 1.0)
    return lam ** (-a0) / a0


def lambda_limit_check(n, beta, gamma, lam, radii, rtol=1e-12):
    """Left side r^a0 (ln lam r)^-m int_{lam r}^inf (ln t / t^(n-bg))^m dt/t, m = 1/(g-1).

    Substituting t = lam r e^v leaves lam^-a0 L^-m int_0^inf (L + v)^m e^(-a0 v) dv
    with L = ln(lam r), which is integrated numerically.
    """
    if not lam > 0:
        raise InvalidParameters("lambda must be positive")
    radii = np.asarray(radii, dtype=float)
    if np.any(np.diff(radii) <= 0):
        raise InvalidParameters("radii must be increasing")
    m = 1.0 / (gamma - 1.0)
    a0 = (n - beta * gamma) * m
    out = []
    for r in radii:
        L = math.log(lam * r)
        if not L > 0:
            raise InvalidParameters("need lam * r > 1 for the logarithm to be positive")
        top = 80.0 / a0
        val, _ = quad(lambda v: ((L + v) / L) ** m * np.exp(-a0 * v), 0.0, top,
                      points=[top * k / 8 for k in range(1, 8)], rtol=rtol)
        out.append((float(r), lam ** (-a0) * val))
    return out
