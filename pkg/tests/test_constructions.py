import numpy as np
import pytest

from wolffkit import (BoundednessVerdict, FastVKind, InvalidParameters, Mode, ModeUnavailable,
                      NotAdmissible, SystemParams, build_pair, coefficient_ratios,
                      fast_trichotomy_fit, verify_decay_class)
from wolffkit.asymptotics import fit_window


def P(n=5, beta=1.0, gamma=2.0, p=3.0, q=3.0, s1=0.0, s2=0.0):
    return SystemParams(n, beta, gamma, p, q, s1, s2)


@pytest.fixture(scope="module")
def slow_pair():
    return build_pair(P(), Mode.SLOW)


@pytest.fixture(scope="module")
def fast_pair():
    return build_pair(P(), "fast")


@pytest.fixture(scope="module")
def slow_report(slow_pair):
    return coefficient_ratios(slow_pair)


@pytest.fixture(scope="module")
def fast_report(fast_pair):
    return coefficient_ratios(fast_pair)


def test_build_pair_examples(slow_pair, fast_pair):
    assert (slow_pair.theta1, slow_pair.theta2) == (0.5, 0.5)
    assert (fast_pair.theta1, fast_pair.theta2) == (1.5, 1.5)
    assert slow_pair.fast_theorem_hypotheses


def test_build_pair_rejections():
    with pytest.raises(ModeUnavailable):
        build_pair(P(p=1.4, q=3.0), Mode.FAST)
    with pytest.raises(NotAdmissible):
        build_pair(P(p=1.5, q=1.5), Mode.SLOW)
    with pytest.raises(NotAdmissible):
        build_pair(P(p=1.0, q=1.0), Mode.FAST)


def test_fast_theorem_flag_follows_hypotheses():
    assert not build_pair(P(s1=1.0, s2=1.0), Mode.SLOW).fast_theorem_hypotheses
    # p = q = 2.2: q0 = p0 = 5/3 < a0 = 3 but q0 + p0 > a0
    assert not build_pair(P(p=2.2, q=2.2), Mode.SLOW).fast_theorem_hypotheses
    assert build_pair(P(p=4.0, q=6.0, s1=-0.5, s2=-0.2), Mode.SLOW).fast_theorem_hypotheses


def test_slow_mode_inequality_chain():
    params = P(n=6, beta=1.2, gamma=1.5, p=2.0, q=4.0, s1=0.3, s2=-0.4)
    pair = build_pair(params, Mode.SLOW)
    e1 = 2 * params.p * pair.theta1 - params.sigma2
    e2 = 2 * params.q * pair.theta2 - params.sigma1
    assert params.bg < e1 < params.n and params.bg < e2 < params.n


def test_slow_report_plateaus(slow_report):
    rep = slow_report
    assert rep.verdict is BoundednessVerdict.DOUBLE_BOUNDED
    assert all(c1 > 0 and c2 > 0 for _, c1, c2 in rep.ratio_samples)
    assert len(rep.ratio_samples) == 60 and rep.radii_window == (1e-3, 1e9)
    # Regression fixture from the first run: c(0)/c(inf) = 3/2 for this pair.
    assert rep.spread_c1 == pytest.approx(1.5, rel=1e-5)
    assert rep.spread_c2 == pytest.approx(rep.spread_c1, rel=1e-12)
    assert rep.tail_spread_c1 < 1.0001


def test_fast_report_plateaus(fast_report):
    rep = fast_report
    assert rep.verdict is BoundednessVerdict.DOUBLE_BOUNDED
    # Regression fixture from the first run: spread 5/2 for this pair.
    assert rep.spread_c1 == pytest.approx(2.5, rel=1e-5)
    assert rep.tail_spread_c1 < 1.001
    # c approaches a positive limit at infinity
    tail = [c1 for r, c1, _ in rep.ratio_samples if r > 1e6]
    assert max(tail) / min(tail) < 1 + 1e-5


def test_scaling_v_rescales_coefficient(slow_pair, slow_report):
    # W(|y|^s1 (2v)^q) = 2^(q/(gamma-1)) W(|y|^s1 v^q): c1 scales, the spread does not.
    from wolffkit import wolff_profile
    radii = np.logspace(-3, 9, 60)
    src = slow_pair.source_u().scaled(2.0**3)
    w = wolff_profile(src, 1.0, 2.0, radii)
    c1 = slow_pair.u(radii) / w
    base = np.array([c for _, c, _ in slow_report.ratio_samples])
    assert np.allclose(c1, base * 2.0**-3, rtol=1e-7)
    assert c1.max() / c1.min() == pytest.approx(slow_report.spread_c1, rel=1e-7)


def test_swap_symmetry():
    params = P(p=2.5, q=4.0, s1=0.5, s2=-0.5)
    pair = build_pair(params, Mode.SLOW)
    other = build_pair(params.swapped(), Mode.SLOW)
    assert (other.theta1, other.theta2) == (pair.theta2, pair.theta1)
    radii = np.logspace(-3, 6, 30)
    a, b = coefficient_ratios(pair, radii), coefficient_ratios(other, radii)
    assert [s[1] for s in a.ratio_samples] == [s[2] for s in b.ratio_samples]
    assert [s[2] for s in a.ratio_samples] == [s[1] for s in b.ratio_samples]


def test_coefficient_ratios_rejects_short_window(slow_pair):
    with pytest.raises(InvalidParameters):
        coefficient_ratios(slow_pair, np.logspace(-1, 3, 20))
    with pytest.raises(InvalidParameters):
        coefficient_ratios(slow_pair, np.logspace(3, -3, 20))


def test_verify_decay_slow(slow_pair):
    fits = verify_decay_class(slow_pair)
    assert fits.expected_u == 1.0 and fits.expected_v == 1.0
    assert fits.u_fit.theta == pytest.approx(1.0, rel=0.02)
    assert fits.v_fit.theta == pytest.approx(1.0, rel=0.02)
    assert fits.u_fit.window == (1e3, 1e9)


def test_slow_exponent_identity():
    # (2 theta2 q - s1 - beta gamma)/(gamma - 1) = 2 theta1 for a non-symmetric case.
    params = P(p=2.5, q=4.0, s1=0.5, s2=-0.5)
    pair = build_pair(params, Mode.SLOW)
    ident = (2 * pair.theta2 * params.q - params.sigma1 - params.bg) / (params.gamma - 1)
    assert ident == pytest.approx(2 * pair.theta1, rel=1e-14)
    fits = verify_decay_class(pair)
    assert fits.u_fit.theta == pytest.approx(2 * pair.theta1, rel=0.02)
    assert fits.v_fit.theta == pytest.approx(2 * pair.theta2, rel=0.02)


def test_verify_decay_fast(fast_pair):
    fits = verify_decay_class(fast_pair)
    assert fits.v_case.kind is FastVKind.PLAIN_FAST
    assert fits.u_fit.theta == pytest.approx(3.0, rel=0.02)
    assert fits.v_fit.theta == pytest.approx(3.0, rel=0.02)
    assert fits.v_fit.kappa == 0.0


@pytest.mark.parametrize("p,kind,theta,kappa", [
    (3.0, FastVKind.PLAIN_FAST, 3.0, 0.0),
    (5 / 3, FastVKind.LOG_CORRECTED, 3.0, 1.0),
    (1.2, FastVKind.REDUCED, 1.6, 0.0),
])
def test_fast_trichotomy(p, kind, theta, kappa):
    case, fit = fast_trichotomy_fit(P(p=p))
    assert case.kind is kind
    assert fit.theta == pytest.approx(theta, rel=0.02)
    if kind is FastVKind.LOG_CORRECTED:
        assert fit.kappa == pytest.approx(kappa, rel=0.10)


def test_trichotomy_window_is_default():
    assert np.array_equal(fit_window(), np.logspace(3, 9, 40))
