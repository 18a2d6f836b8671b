"""Explicit radial solution pairs u = (1+|x|^2)^-theta1, v = (1+|x|^2)^-theta2.

For admissible parameters the pair solves the system with coefficients

    c1 = u / W(|y|^sigma1 v^q),   c2 = v / W(|y|^sigma2 u^p)

that are bounded above and below.  A finite radius window cannot certify
this, so the coefficients are sampled and their spread is reported.
"""

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .asymptotics import RateFit, fit_rate, fit_window
from .core import FastVKind, classify, fast_rate, fast_v_rate, Regime, slow_rates
from .errors import InvalidParameters, ModeUnavailable, NotAdmissible
from .wolff import DEFAULT_QUAD, power_pair_density, wolff_profile

PLATEAU_FACTOR = 1.10
INNER_EDGE = 1e3
DEFAULT_RADII = np.logspace(-3, 9, 60)


class Mode(enum.Enum):
    SLOW = "slow"
    FAST = "fast"


class BoundednessVerdict(enum.Enum):
    DOUBLE_BOUNDED = "DoubleBounded"
    SPREAD_EXCEEDED = "SpreadExceeded"


def _fast_theorem_hypotheses(params):
    """gamma in (1,2], q >= p > 1, s1 <= s2 <= 0 (or the swapped ordering), q0 + p0 <= a0."""
    if not (1.0 < params.gamma <= 2.0):
        return False
    try:
        q0, p0 = slow_rates(params)
    except ValueError:
        return False
    if q0 + p0 > fast_rate(params) * (1 + 1e-12):
        return False
    p, q, s1, s2 = params.p, params.q, params.sigma1, params.sigma2
    ordered = q >= p > 1 and s1 <= s2 <= 0
    swapped = p >= q > 1 and s2 <= s1 <= 0
    return ordered or swapped


@dataclass(frozen=True)
class ExplicitPair:
    theta1: float
    theta2: float
    mode: Mode
    params: object
    fast_theorem_hypotheses: bool

    def u(self, r):
        return (1.0 + np.asarray(r, dtype=float) ** 2) ** -self.theta1

    def v(self, r):
        return (1.0 + np.asarray(r, dtype=float) ** 2) ** -self.theta2

    def source_u(self):
        """|y|^sigma1 v^q, the density whose potential reproduces u."""
        pr = self.params
        return power_pair_density(self.theta2, pr.sigma1, pr.q, pr.n)

    def source_v(self):
        """|y|^sigma2 u^p, the density whose potential reproduces v."""
        pr = self.params
        return power_pair_density(self.theta1, pr.sigma2, pr.p, pr.n)

    def swapped(self):
        return ExplicitPair(self.theta2, self.theta1, self.mode, self.params.swapped(),
                            self.fast_theorem_hypotheses)


def build_pair(params, mode):
    """Slow pair 2theta = (q0, p0) or fast pair 2theta1 = 2theta2 = a0."""
    mode = Mode(mode)
    report = classify(params)
    if report.regime is not Regime.ADMISSIBLE:
        raise NotAdmissible(f"parameters are {report.regime.value}: {report.reason}")
    n, g1, bg = params.n, params.gamma - 1.0, params.bg
    a0 = fast_rate(params)
    if mode is Mode.SLOW:
        q0, p0 = slow_rates(params)
        theta1, theta2 = 0.5 * q0, 0.5 * p0
        e1 = 2.0 * params.p * theta1 - params.sigma2
        e2 = 2.0 * params.q * theta2 - params.sigma1
        if not (bg < e1 < n and bg < e2 < n):
            raise NotAdmissible(
                f"slow pair needs beta*gamma < 2p theta1 - s2, 2q theta2 - s1 < n; got {e1}, {e2}")
    else:
        p_min = (n + params.sigma2) * g1 / (n - bg)
        q_min = (n + params.sigma1) * g1 / (n - bg)
        if not (params.p > p_min and params.q > q_min):
            raise ModeUnavailable(
                f"fast pair needs p > {p_min!r} and q > {q_min!r}; got p={params.p!r}, q={params.q!r}")
        theta1 = theta2 = 0.5 * a0
    return ExplicitPair(theta1, theta2, mode, params, _fast_theorem_hypotheses(params))


@dataclass(frozen=True)
class BoundednessReport:
    ratio_samples: tuple  # (r, c1, c2)
    c1_min: float
    c1_max: float
    c2_min: float
    c2_max: float
    spread_c1: float
    spread_c2: float
    inner_spread_c1: float
    inner_spread_c2: float
    tail_spread_c1: float
    tail_spread_c2: float
    radii_window: tuple
    verdict: BoundednessVerdict


def _spread(c):
    return float(c.max() / c.min()) if c.size else math.nan


def _plateau(full, inner, tail):
    if not all(math.isfinite(v) for v in (full, inner, tail)):
        return False
    return tail <= PLATEAU_FACTOR and full <= PLATEAU_FACTOR * inner


def coefficient_ratios(pair, radii=None, quad=DEFAULT_QUAD):
    """Sample c1 = u/W(|y|^s1 v^q) and c2 = v/W(|y|^s2 u^p) on ``radii``.

    The verdict is DoubleBounded when both coefficients are positive and
    plateau: over the tail (r >= 1e3) they vary by at most 10 %, and the
    tail raises the spread of the inner window [r_lo, 1e3] by at most 10 %.
    """
    radii = DEFAULT_RADII if radii is None else np.asarray(radii, dtype=float)
    if radii.ndim != 1 or radii.size < 2 or np.any(np.diff(radii) <= 0) or radii[0] <= 0:
        raise InvalidParameters("radii must be positive and strictly increasing")
    if not (radii[0] <= 1e-3 and radii[-1] >= INNER_EDGE
            and math.log10(radii[-1] / radii[0]) >= 6):
        raise InvalidParameters("radii must span at least six decades covering [1e-3, 1e3]")
    pr = pair.params
    w1 = wolff_profile(pair.source_u(), pr.beta, pr.gamma, radii, quad)
    w2 = wolff_profile(pair.source_v(), pr.beta, pr.gamma, radii, quad)
    c1 = pair.u(radii) / w1
    c2 = pair.v(radii) / w2
    positive = bool(np.all(c1 > 0) and np.all(c2 > 0))
    inner = radii <= INNER_EDGE
    tail = radii >= INNER_EDGE
    s = {name: (_spread(c), _spread(c[inner]), _spread(c[tail])) for name, c in (("c1", c1), ("c2", c2))}
    ok = positive and all(_plateau(*v) for v in s.values())
    return BoundednessReport(
        ratio_samples=tuple(zip(radii.tolist(), c1.tolist(), c2.tolist())),
        c1_min=float(c1.min()), c1_max=float(c1.max()),
        c2_min=float(c2.min()), c2_max=float(c2.max()),
        spread_c1=s["c1"][0], spread_c2=s["c2"][0],
        inner_spread_c1=s["c1"][1], inner_spread_c2=s["c2"][1],
        tail_spread_c1=s["c1"][2], tail_spread_c2=s["c2"][2],
        radii_window=(float(radii[0]), float(radii[-1])),
        verdict=BoundednessVerdict.DOUBLE_BOUNDED if ok else BoundednessVerdict.SPREAD_EXCEEDED)


def _tail_fit(density, params, radii, quad, allow_log):
    w = wolff_profile(density, params.beta, params.gamma, radii, quad)
    return fit_rate(np.column_stack([radii, w]), allow_log=allow_log)


@dataclass(frozen=True)
class DecayFits:
    u_fit: RateFit  # fit of W(|y|^s1 v^q)
    v_fit: RateFit  # fit of W(|y|^s2 u^p)
    expected_u: float
    expected_v: float
    expected_kappa_v: float
    v_case: Optional[object] = None


def verify_decay_class(pair, quad=DEFAULT_QUAD, radii=None):
    """Fit the tail rates of both potentials and attach the predicted rates."""
    radii = fit_window() if radii is None else np.asarray(radii, dtype=float)
    pr = pair.params
    if pair.mode is Mode.SLOW:
        q0, p0 = slow_rates(pr)
        fu = _tail_fit(pair.source_u(), pr, radii, quad, False)
        fv = _tail_fit(pair.source_v(), pr, radii, quad, False)
        return DecayFits(fu, fv, q0, p0, 0.0)
    fu = _tail_fit(pair.source_u(), pr, radii, quad, False)
    case, fv = fast_trichotomy_fit(pr, quad, radii)
    return DecayFits(fu, fv, fast_rate(pr), case.rate, case.log_exponent, case)


def fast_trichotomy_fit(params, quad=DEFAULT_QUAD, radii=None):
    """Fit W(|y|^sigma2 u^p) for u decaying at the fast rate a0.

    Returns the predicted case and the fit; the log regressor is used only
    on the log-corrected branch.
    """
    radii = fit_window() if radii is None else np.asarray(radii, dtype=float)
    case = fast_v_rate(params)
    density = power_pair_density(0.5 * fast_rate(params), params.sigma2, params.p, params.n)
    fit = _tail_fit(density, params, radii, quad, case.kind is FastVKind.LOG_CORRECTED)
    return case, fit
