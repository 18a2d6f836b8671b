"""System parameters, closed-form exponents and the regime classifier.

The system is

    u = c1(x) W_{beta,gamma}(|y|^sigma1 v^q),   v = c2(x) W_{beta,gamma}(|y|^sigma2 u^p)

on R^n with double bounded coefficients c1, c2.
"""

import enum
import math
from dataclasses import dataclass, replace
from typing import Optional

from .errors import DegenerateProduct, InvalidParameters, NonpositiveDenominator

EQ_RTOL = 1e-12


def nearly_equal(a, b, rtol=EQ_RTOL):
    """Equality used at classification boundaries: exact, or within ``rtol``."""
    if a == b:
        return True
    return abs(a - b) <= rtol * max(abs(a), abs(b))


@dataclass(frozen=True)
class SystemParams:
    n: int
    beta: float
    gamma: float
    p: float
    q: float
    sigma1: float = 0.0
    sigma2: float = 0.0
    allow_nonconvention: bool = False

    def __post_init__(self):
        for name in ("beta", "gamma", "p", "q", "sigma1", "sigma2"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError):
                raise InvalidParameters(f"{name} must be a real number, got {value!r}") from None
            if not math.isfinite(value):
                raise InvalidParameters(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        try:
            integral = float(self.n).is_integer()
        except (TypeError, ValueError):
            integral = False
        if isinstance(self.n, bool) or not integral or self.n < 3:
            raise InvalidParameters(f"n must be an integer >= 3, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))
        if self.beta <= 0:
            raise InvalidParameters(f"beta must be > 0, got {self.beta}")
        if self.gamma <= 1:
            raise InvalidParameters(f"gamma must be > 1, got {self.gamma}")
        if self.p <= 0 or self.q <= 0:
            raise InvalidParameters(f"p and q must be > 0, got p={self.p}, q={self.q}")
        if not self.beta * self.gamma < self.n:
            raise InvalidParameters(
                f"beta*gamma must be < n, got beta*gamma={self.beta * self.gamma}, n={self.n}")
        if not self.allow_nonconvention:
            bg = self.beta * self.gamma
            for name in ("sigma1", "sigma2"):
                if not getattr(self, name) > -bg:
                    raise InvalidParameters(
                        f"{name} must be > -beta*gamma = {-bg} "
                        f"(pass allow_nonconvention to override)")

    @property
    def bg(self):
        return self.beta * self.gamma

    def swapped(self):
        """Exchange the roles of (p, sigma2) and (q, sigma1)."""
        return replace(self, p=self.q, q=self.p, sigma1=self.sigma2, sigma2=self.sigma1)

    @property
    def convention_holds(self):
        return self.sigma1 > -self.bg and self.sigma2 > -self.bg


def _degenerate(params):
    return nearly_equal(params.p * params.q, (params.gamma - 1.0) ** 2)


def eta0(params):
    g1 = params.gamma - 1.0
    return params.bg * (g1 + params.q) + g1 * params.sigma1 + params.sigma2 * params.q


def iter_ratio(params):
    return params.p * params.q / (params.gamma - 1.0) ** 2


def slow_rates(params):
    """(q0, p0): the slow decay exponents of u and v."""
    if _degenerate(params):
        raise DegenerateProduct("pq = (gamma-1)^2: slow rates are undefined")
    g1 = params.gamma - 1.0
    den = params.p * params.q - g1**2
    q0 = (params.bg * (g1 + params.q) + g1 * params.sigma1 + params.sigma2 * params.q) / den
    p0 = (params.bg * (g1 + params.p) + g1 * params.sigma2 + params.sigma1 * params.p) / den
    return q0, p0


def fast_rate(params):
    return (params.n - params.bg) / (params.gamma - 1.0)


class FastVKind(enum.Enum):
    PLAIN_FAST = "PlainFast"
    LOG_CORRECTED = "LogCorrected"
    REDUCED = "Reduced"


@dataclass(frozen=True)
class FastVRateCase:
    kind: FastVKind
    rate: float
    log_exponent: float
    discriminant: float


def fast_v_rate(params):
    """Decay law of v for a fast-decaying pair, decided by p*a0 - sigma2 vs n."""
    a0 = fast_rate(params)
    d = params.p * a0 - params.sigma2
    if nearly_equal(d, params.n):
        return FastVRateCase(FastVKind.LOG_CORRECTED, a0, 1.0 / (params.gamma - 1.0), d)
    if d > params.n:
        return FastVRateCase(FastVKind.PLAIN_FAST, a0, 0.0, d)
    rate = (params.p * a0 - (params.bg + params.sigma2)) / (params.gamma - 1.0)
    return FastVRateCase(FastVKind.REDUCED, rate, 0.0, d)


def _require_supercritical_product(params):
    if _degenerate(params) or params.p * params.q < (params.gamma - 1.0) ** 2:
        raise DegenerateProduct("criticality is defined only for pq > (gamma-1)^2")


def criticality_gap(params):
    """q0 + p0 - a0; non-positive means the non-subcritical condition holds."""
    _require_supercritical_product(params)
    q0, p0 = slow_rates(params)
    return q0 + p0 - fast_rate(params)


def criticality_gap_hls_form(params):
    """The same condition written as (n+s1)/(q+g-1) + (n+s2)/(p+g-1) - a0.

    Differs from :func:`criticality_gap` in value but not in sign.
    """
    _require_supercritical_product(params)
    g1 = params.gamma - 1.0
    return ((params.n + params.sigma1) / (params.q + g1)
            + (params.n + params.sigma2) / (params.p + g1) - fast_rate(params))


def optimal_integrability_thresholds(params, strict=False):
    """(r_min, s_min) lower bounds of the optimal Lebesgue exponents.

    If p*a0 - (beta*gamma + sigma2) <= 0 the second branch of s_min is
    vacuous and s_min is reported as +inf; with ``strict=True`` this raises
    NonpositiveDenominator instead.
    """
    n, g1 = params.n, params.gamma - 1.0
    base = n * g1 / (n - params.bg)
    den = params.p * fast_rate(params) - (params.bg + params.sigma2)
    if den <= 0:
        if strict:
            raise NonpositiveDenominator(
                f"p*a0 - (beta*gamma + sigma2) = {den} <= 0; s-threshold is infinite")
        return base, math.inf
    return base, max(base, n * g1 / den)


@dataclass(frozen=True)
class ExponentSet:
    q0: Optional[float]
    p0: Optional[float]
    a0: float
    iter_ratio: float
    eta0: float
    r0_int: Optional[float]
    s0_int: Optional[float]


def exponents(params):
    try:
        q0, p0 = slow_rates(params)
    except DegenerateProduct:
        q0 = p0 = None
    r0 = params.n / q0 if q0 is not None and q0 > 0 else None
    s0 = params.n / p0 if p0 is not None and p0 > 0 else None
    return ExponentSet(q0, p0, fast_rate(params), iter_ratio(params), eta0(params), r0, s0)


class Regime(enum.Enum):
    NONEXISTENCE_SUBPRODUCT = "NonexistenceSubproduct"
    NONEXISTENCE_RATE = "NonexistenceRate"
    NONEXISTENCE_ENDPOINT = "NonexistenceEndpoint"
    ADMISSIBLE = "Admissible"
    ENDPOINT_UNDECIDED = "EndpointUndecided"

    @property
    def is_nonexistence(self):
        return self.value.startswith("Nonexistence")


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    reason: str
    q0: Optional[float]
    p0: Optional[float]
    max_rate: Optional[float]
    a0: float
    criticality: Optional[float]
    convention_holds: bool


def classify(params):
    """Place ``params`` in the existence / non-existence phase diagram."""
    a0 = fast_rate(params)
    g1sq = (params.gamma - 1.0) ** 2
    pq = params.p * params.q
    conv = params.convention_holds
    if _degenerate(params) or pq < g1sq:
        q0 = p0 = None
        if not _degenerate(params):
            q0, p0 = slow_rates(params)
        return RegimeReport(Regime.NONEXISTENCE_SUBPRODUCT, "pq <= (gamma-1)^2",
                            q0, p0, None if q0 is None else max(q0, p0), a0, None, conv)

    q0, p0 = slow_rates(params)
    m = max(q0, p0)
    gap = q0 + p0 - a0
    if nearly_equal(m, a0):
        if params.gamma <= 2.0:
            return RegimeReport(Regime.NONEXISTENCE_ENDPOINT,
                                "pq > (gamma-1)^2 and max(q0, p0) = a0 with gamma <= 2",
                                q0, p0, m, a0, gap, conv)
        return RegimeReport(Regime.ENDPOINT_UNDECIDED,
                            "pq > (gamma-1)^2 and max(q0, p0) = a0 with gamma > 2",
                            q0, p0, m, a0, gap, conv)
    if m > a0:
        return RegimeReport(Regime.NONEXISTENCE_RATE, "pq > (gamma-1)^2 and max(q0, p0) > a0",
                            q0, p0, m, a0, gap, conv)
    return RegimeReport(Regime.ADMISSIBLE, "pq > (gamma-1)^2 and max(q0, p0) < a0",
                        q0, p0, m, a0, gap, conv)
