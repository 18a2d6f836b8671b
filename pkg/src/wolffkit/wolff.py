"""Wolff potentials of radial densities.

For a radial density f on R^n and |x| = rho,

    W_{beta,gamma}(f)(x) = int_0^inf (mu(B_t(x)) / t^(n - beta*gamma))^(1/(gamma-1)) dt/t,

where mu(B_t(x)) is reduced to a one-dimensional radial integral weighted by
the fraction of each sphere |y| = r lying inside B_t(x).  Both integrals are
done with the batched Gauss-Kronrod engine in logarithmic variables, so
scales from the density core up to t ~ 1e17 are handled in one pass.
"""

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .errors import DivergentTail, InvalidParameters, NonIntegrableAtOrigin, QuadratureFailure
from .quadrature import integrate_batch
from .special import betainc, sphere_area


@dataclass(frozen=True)
class RadialDensity:
    """Nonnegative radial density f(|y|) on R^n.

    ``origin_exponent`` k0 and ``tail_exponent`` kinf describe
    f(r) ~ r^k0 as r -> 0 and f(r) ~ r^-kinf as r -> inf; use ``math.inf``
    for compactly supported or super-polynomially decaying densities.
    ``breakpoints`` lists radii where f is not smooth.
    """

    func: Callable[[np.ndarray], np.ndarray]
    n: int
    origin_exponent: float = 0.0
    tail_exponent: float = math.inf
    breakpoints: tuple = ()
    support_radius: Optional[float] = None
    kind: str = "generic"
    scale: float = 1.0
    params: dict = field(default_factory=dict, compare=False)

    def __call__(self, r):
        return self.func(np.asarray(r, dtype=float))

    def scaled(self, lam):
        """The density lam * f."""
        func = self.func
        return replace(self, func=lambda r: lam * func(r),
                       params={**self.params, "multiplier": lam * self.params.get("multiplier", 1.0)})

    @property
    def finite_mass(self):
        return self.support_radius is not None or self.tail_exponent > self.n


def power_pair_density(theta, sigma, coeff_power, n, multiplier=1.0):
    """f(r) = r^sigma (1 + r^2)^(-theta * coeff_power).

    Used for |y|^sigma v^q with v = (1 + |y|^2)^-theta.
    """
    e = theta * coeff_power

    def func(r):
        with np.errstate(divide="ignore"):
            return multiplier * np.exp(sigma * np.log(r) - e * np.log1p(r * r))

    return RadialDensity(func, n, origin_exponent=float(sigma),
                         tail_exponent=2.0 * e - sigma, kind="power_pair",
                         params={"theta": theta, "sigma": sigma,
                                 "coeff_power": coeff_power, "multiplier": multiplier})


def indicator_density(n, radius=1.0):
    """Indicator of the ball of the given radius about the origin."""
    return RadialDensity(lambda r: (r < radius).astype(float), n, origin_exponent=0.0,
                         tail_exponent=math.inf, breakpoints=(float(radius),),
                         support_radius=float(radius), kind="indicator",
                         scale=float(radius), params={"radius": radius})


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-8
    abs_tol: float = 1e-300
    max_subdivisions: int = 2000
    # None selects the analytic tail; a float is a hard upper cutoff T_max.
    tail_cutoff: Optional[float] = None

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise InvalidParameters("rel_tol and abs_tol must be positive")
        if self.max_subdivisions < 8:
            raise InvalidParameters("max_subdivisions must be >= 8")
        if self.tail_cutoff is not None and not self.tail_cutoff > 0:
            raise InvalidParameters("tail_cutoff must be positive")

    @property
    def inner_rel_tol(self):
        return max(self.rel_tol * 1e-2, 1e-13)


DEFAULT_QUAD = QuadratureSpec()

# Positive radii below this multiple of the density scale are not resolvable
# in double precision (ball masses underflow) and are rejected.
RHO_MIN_REL = 1e-30


# --------------------------------------------------------------------------
# cap fractions

def _cap_from_factors(n, A, B, C, D, r, rho):
    """Cap fraction from A = t-r+rho, B = t+r-rho, C = r+rho-t, D = r+rho+t."""
    two_r_rho = 2.0 * r * rho
    one_minus_u = A * B / two_r_rho
    one_plus_u = C * D / two_r_rho
    u = np.where(one_minus_u < one_plus_u, 1.0 - one_minus_u, one_plus_u - 1.0)
    x = np.clip(one_minus_u * one_plus_u, 0.0, 1.0)
    half_i = 0.5 * betainc(0.5 * (n - 1), 0.5, x, u * u)
    return np.where(u >= 0.0, half_i, 1.0 - half_i)


def cap_fraction(n, r, rho, t):
    """Fraction of the sphere |y| = r lying in the ball B_t(x), |x| = rho."""
    if n < 2:
        raise InvalidParameters("cap_fraction needs n >= 2")
    r, rho, t = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (r, rho, t)))
    scalar = r.ndim == 0
    r, rho, t = (np.atleast_1d(v).astype(float) for v in (r, rho, t))
    out = np.zeros(r.shape)
    inside = r + rho <= t
    out[inside] = 1.0
    at_origin = (rho == 0.0) & ~inside
    out[at_origin] = (r[at_origin] < t[at_origin]).astype(float)
    partial = ~inside & ~at_origin & (np.abs(r - rho) < t) & (r > 0)
    if partial.any():
        rp, hp, tp = r[partial], rho[partial], t[partial]
        out[partial] = _cap_from_factors(n, tp - rp + hp, tp + rp - hp, rp + hp - tp,
                                         rp + hp + tp, rp, hp)
    return float(out[0]) if scalar else out


# --------------------------------------------------------------------------
# ball masses

def _density_breaks(f):
    br = set(f.breakpoints)
    if f.support_radius is not None:
        br.add(f.support_radius)
    return np.array(sorted(b for b in br if b > 0), dtype=float)


def _check_origin(f):
    if not f.origin_exponent > -f.n:
        raise NonIntegrableAtOrigin(
            f"density ~ r^{f.origin_exponent} is not locally integrable in R^{f.n}")


def _breaks_matrix(lo, hi, candidates):
    """Rows of sorted breakpoints [lo, candidates in (lo, hi), hi], NaN padded."""
    if candidates.shape[1]:
        inside = (candidates > lo[:, None]) & (candidates < hi[:, None])
        cand = np.where(inside, candidates, np.nan)
        mat = np.concatenate([lo[:, None], cand, hi[:, None]], axis=1)
    else:
        mat = np.stack([lo, hi], axis=1)
    mat.sort(axis=1)  # NaN sorts last
    return mat


def _intervals(mat):
    a = mat[:, :-1]
    b = mat[:, 1:]
    ok = np.isfinite(a) & np.isfinite(b) & (b > a)
    owner = np.broadcast_to(np.arange(mat.shape[0])[:, None], a.shape)
    return a[ok], b[ok], owner[ok]


def _mass_batch(f, rho, t, rtol, max_sub):
    """mu(B_t(x)) for flat arrays of (|x|, t) pairs."""
    n = f.n
    k0 = f.origin_exponent
    rho = np.asarray(rho, dtype=float).ravel()
    t = np.asarray(t, dtype=float).ravel()
    size = rho.size
    breaks = _density_breaks(f)
    supp = math.inf if f.support_radius is None else f.support_radius
    base_scale = min([f.scale, *breaks]) if breaks.size else f.scale

    # Full shells: r in (0, R) with R = t - rho lie entirely inside the ball.
    R_full = np.where(rho == 0.0, t, np.where(t > rho, t - rho, 0.0))
    fi = np.flatnonzero(R_full > 0)
    R_eff = np.minimum(R_full[fi], supp)
    r_floor = 1e-8 * np.minimum(np.minimum(R_full[fi], base_scale), R_eff)
    full_ok = R_eff > r_floor
    fi, R_eff, r_floor = fi[full_ok], R_eff[full_ok], r_floor[full_ok]

    # Partial shells: r in (|t - rho|, t + rho), parametrized by eps = r - |t - rho|.
    pi = np.flatnonzero(rho > 0)
    rho_p, t_p = rho[pi], t[pi]
    lo_p = np.abs(t_p - rho_p)
    width = 2.0 * np.minimum(rho_p, t_p)
    eps_max = np.minimum(width, supp - lo_p)
    eps_min = 1e-10 * np.where(lo_p > 0, np.minimum(width, lo_p), width)
    part_ok = eps_max > eps_min
    pi, rho_p, t_p, lo_p, eps_min, eps_max = (
        v[part_ok] for v in (pi, rho_p, t_p, lo_p, eps_min, eps_max))
    outer_case = t_p >= rho_p

    nf = fi.size
    np_ = pi.size
    mat_f = _breaks_matrix(np.log(r_floor), np.log(R_eff),
                           np.log(np.broadcast_to(breaks, (nf, breaks.size))))
    with np.errstate(divide="ignore", invalid="ignore"):
        cand_p = np.log(breaks[None, :] - lo_p[:, None])
    mat_p = _breaks_matrix(np.log(eps_min), np.log(eps_max), cand_p)

    def full_integrand(x, own):
        r = np.exp(x)
        return f(r) * r**n

    def partial_integrand(x, own):
        eps = np.exp(x)
        lo = lo_p[own][:, None]
        rh = rho_p[own][:, None]
        tt = t_p[own][:, None]
        oc = outer_case[own][:, None]
        r = lo + eps
        # t >= rho: lo = t - rho, C = eps.  t < rho: lo = rho - t, B = eps.
        A = np.where(oc, 2.0 * rh - eps, 2.0 * tt - eps)
        B = np.where(oc, 2.0 * lo + eps, eps)
        C = np.where(oc, eps, 2.0 * lo + eps)
        D = np.where(oc, 2.0 * tt + eps, 2.0 * rh + eps)
        cap = _cap_from_factors(n, A, B, C, D, r, rh)
        return f(r) * r ** (n - 1) * cap * eps

    def run(integrand, mat, count, atol, index):
        if not count:
            return np.zeros(0)
        a, b, owner = _intervals(mat)
        try:
            vals, _ = integrate_batch(integrand, a, b, owner, count, rtol=rtol,
                                      atol=atol, max_intervals=max_sub)
        except QuadratureFailure as exc:
            k = index[(exc.owners or [0])[0]]
            raise QuadratureFailure(
                f"ball mass quadrature failed at rho={float(rho[k])!r}, "
                f"t={float(t[k])!r}: {exc}", rho=float(rho[k]), t=float(t[k])) from exc
        return vals

    full_vals = run(full_integrand, mat_f, nf, 0.0, fi)
    if nf:
        full_vals = full_vals + f(r_floor) * r_floor**n / (n + k0)
    # Partial shells only need accuracy relative to the whole ball mass.
    full_of_task = np.zeros(size)
    full_of_task[fi] = full_vals
    part_vals = run(partial_integrand, mat_p, np_, rtol * full_of_task[pi], pi)

    total = full_of_task
    total[pi] += part_vals
    return sphere_area(n) * total


def ball_mass(f, rho, t, quad=DEFAULT_QUAD):
    """mu(B_t(x)) for the density f and |x| = rho; vectorized over t."""
    _check_origin(f)
    if rho < 0:
        raise InvalidParameters("rho must be >= 0")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(t_arr <= 0):
        raise InvalidParameters("t must be > 0")
    out = _mass_batch(f, np.full(t_arr.shape, float(rho)), t_arr,
                      quad.inner_rel_tol, quad.max_subdivisions)
    return float(out[0]) if np.ndim(t) == 0 else out


class BallMassProfile:
    """t -> mu(B_t(x)) for fixed density and |x| = rho, with a value cache."""

    def __init__(self, f, rho, quad=DEFAULT_QUAD):
        _check_origin(f)
        self.f = f
        self.rho = float(rho)
        self.quad = quad
        self._cache = {}

    def __call__(self, t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        missing = np.array(sorted({float(v) for v in t_arr if float(v) not in self._cache}))
        if missing.size:
            vals = ball_mass(self.f, self.rho, missing, self.quad)
            self._cache.update(zip(missing.tolist(), np.atleast_1d(vals).tolist()))
        out = np.array([self._cache[float(v)] for v in t_arr])
        return float(out[0]) if np.ndim(t) == 0 else out

    @property
    def cached(self):
        """Evaluated (t, mass) pairs sorted by t."""
        return sorted(self._cache.items())

    @property
    def full_mass(self):
        if not self.f.finite_mass:
            return math.inf
        if self.f.support_radius is not None:
            return self(self.rho + self.f.support_radius * (1 + 1e-12))
        return ball_mass(self.f, 0.0, 1e12 * max(1.0, self.rho, self.f.scale), self.quad)


# --------------------------------------------------------------------------
# Wolff potential

def _check_potential(f, beta, gamma):
    if not gamma > 1:
        raise InvalidParameters("gamma must be > 1")
    if not beta > 0:
        raise InvalidParameters("beta must be > 0")
    if not beta * gamma < f.n:
        raise InvalidParameters("beta*gamma must be < n")
    _check_origin(f)
    if f.support_radius is None and not f.tail_exponent > beta * gamma:
        raise DivergentTail(
            f"density tail r^-{f.tail_exponent} needs exponent > beta*gamma = {beta * gamma}")


def wolff_profile(f, beta, gamma, rhos, quad=DEFAULT_QUAD):
    """W_{beta,gamma}(f) at every radius in ``rhos`` (one batched computation)."""
    _check_potential(f, beta, gamma)
    rhos = np.atleast_1d(np.asarray(rhos, dtype=float))
    if np.any(rhos < 0) or not np.all(np.isfinite(rhos)):
        raise InvalidParameters("radii must be finite and >= 0")
    n = f.n
    bg = beta * gamma
    m = 1.0 / (gamma - 1.0)
    a0 = (n - bg) * m
    breaks = _density_breaks(f)
    big = max([f.scale, *breaks]) if breaks.size else f.scale
    small = min([f.scale, *breaks]) if breaks.size else f.scale
    n_r = rhos.size
    tiny = (rhos > 0) & (rhos < RHO_MIN_REL * small)
    if tiny.any():
        raise InvalidParameters(
            f"radius {float(rhos[tiny][0])!r} is below the resolvable range "
            f"(0 or >= {RHO_MIN_REL * small!r} for this density)")

    t_lo = np.empty(n_r)
    t_hi = np.empty(n_r)
    t_breaks = []
    for i, rho in enumerate(rhos):
        near = [small]
        if rho > 0:
            near.append(rho)
            near.extend(abs(rho - b) for b in breaks if b != rho)
        t_lo[i] = 1e-6 * min(near)
        t_hi[i] = quad.tail_cutoff if quad.tail_cutoff is not None else 1e7 * (rho + big)
        cands = [rho] + [abs(rho - b) for b in breaks] + [rho + b for b in breaks]
        t_breaks.append(cands)

    # Starting intervals in s = ln t, at most 6 units wide.
    a_list, b_list, o_list = [], [], []
    for i in range(n_r):
        s0, s1 = math.log(t_lo[i]), math.log(t_hi[i])
        pts = {s0, s1}
        pts.update(math.log(c) for c in t_breaks[i] if t_lo[i] < c < t_hi[i])
        pts = sorted(pts)
        for lo, hi in zip(pts[:-1], pts[1:]):
            k = max(1, math.ceil((hi - lo) / 6.0))
            edges = np.linspace(lo, hi, k + 1)
            a_list.append(edges[:-1])
            b_list.append(edges[1:])
            o_list.append(np.full(k, i))
    a = np.concatenate(a_list)
    b = np.concatenate(b_list)
    owner = np.concatenate(o_list)

    inner_tol = quad.inner_rel_tol

    def g_of(s, rho_rows):
        mass = _mass_batch(f, rho_rows.ravel(), np.exp(s).ravel(), inner_tol,
                           quad.max_subdivisions).reshape(s.shape)
        with np.errstate(divide="ignore"):
            log_g = m * (np.log(mass) - (n - bg) * s)
        return np.exp(log_g)

    def integrand(x, own):
        rho_rows = np.broadcast_to(rhos[own][:, None], x.shape)
        return g_of(x, rho_rows)

    try:
        body, _ = integrate_batch(integrand, a, b, owner, n_r, rtol=quad.rel_tol,
                                  atol=quad.abs_tol, max_intervals=quad.max_subdivisions)
    except QuadratureFailure as exc:
        if exc.rho is None and exc.owners:
            rho = float(rhos[exc.owners[0]])
            raise QuadratureFailure(f"Wolff quadrature failed at rho={rho!r}: {exc}",
                                    rho=rho) from exc
        raise

    # Analytic end pieces: g is a power of t below t_lo and above t_hi.
    g_lo = g_of(np.log(t_lo), rhos)
    kappa_loc = np.where(rhos == 0.0, f.origin_exponent, 0.0)
    lo_rate = (bg + kappa_loc) * m
    with np.errstate(divide="ignore"):
        lower = np.where(lo_rate > 0, g_lo / np.where(lo_rate > 0, lo_rate, 1.0), np.inf)
    lower = np.where(g_lo == 0.0, 0.0, lower)
    if quad.tail_cutoff is not None:
        upper = np.zeros(n_r)
    else:
        g_hi = g_of(np.log(t_hi), rhos)
        kinf = f.tail_exponent
        if f.finite_mass and kinf != n:
            hi_rate = np.full(n_r, a0)
        elif kinf < n:
            hi_rate = np.full(n_r, (kinf - bg) * m)
        else:
            hi_rate = a0 - m / np.log(t_hi)
        upper = g_hi / hi_rate
    return body + lower + upper


def wolff_potential(f, beta, gamma, rho, quad=DEFAULT_QUAD):
    """W_{beta,gamma}(f)(x) for |x| = rho."""
    return float(wolff_profile(f, beta, gamma, [rho], quad)[0])
