"""Closed-form gains, roots, and the discrete executor."""

import math

import numpy as np
import pytest

from gsls import (
    Beta1Roots,
    ControlParams,
    beta1_roots,
    feedback_gain_partials,
    gain_long_closed,
    gain_short_closed,
    gain_total_closed,
    positive_gain_condition,
    run_strategy,
)


def test_control_params_defaults_and_derived_gains():
    p = ControlParams(i0=2.0, k=1.5)
    assert p.alpha == 1.0 and p.beta == 1.0
    assert p.k_long == 1.5
    assert p.k_short == 1.5
    q = ControlParams(1.0, 2.0, alpha=0.5, beta=3.0)
    assert q.k_short == 6.0


@pytest.mark.parametrize("kwargs", [
    {"i0": 0.0, "k": 1.0},
    {"i0": 1.0, "k": 0.0},
    {"i0": 1.0, "k": -1.0},
    {"i0": 1.0, "k": 1.0, "alpha": 0.0},
    {"i0": 1.0, "k": 1.0, "beta": -0.5},
    {"i0": math.inf, "k": 1.0},
    {"i0": 1.0, "k": math.nan},
])
def test_control_params_rejects_non_positive_or_non_finite(kwargs):
    with pytest.raises(ValueError):
        ControlParams(**kwargs)


def test_gain_long_closed_value():
    # (1/3) * (1.5**3 - 1) = 2.375/3
    p = ControlParams(i0=1.0, k=3.0)
    assert gain_long_closed(p, 1.5) == pytest.approx(0.7916666666666666, rel=1e-15)


def test_gain_short_closed_values():
    assert gain_short_closed(ControlParams(1.0, 1.0), 1.0) == 0.0
    assert gain_short_closed(ControlParams(1.0, 1.0, alpha=0.5), 2.0) == pytest.approx(-0.25)
    # alpha=2, beta=2, K=1: (2/2)*(0.5**-2 - 1) = 3
    p = ControlParams(1.0, 1.0, alpha=2.0, beta=2.0)
    assert gain_short_closed(p, 0.5) == pytest.approx(3.0, rel=1e-15)


def test_gain_total_closed_values():
    sls = ControlParams(1.0, 1.0)
    assert gain_total_closed(sls, 2.0) == pytest.approx(0.5, rel=1e-15)
    for k in (0.5, 1.0, 3.7):
        assert gain_total_closed(ControlParams(1.0, k), 1.0) == 0.0
    p = ControlParams(1.0, 1.0, alpha=0.5)
    assert gain_total_closed(p, 2.0) == pytest.approx(0.75, rel=1e-15)


@pytest.mark.parametrize("fn", [gain_long_closed, gain_short_closed, gain_total_closed])
@pytest.mark.parametrize("q", [0.0, -1.0])
def test_closed_forms_reject_non_positive_ratio(fn, q):
    with pytest.raises(ValueError):
        fn(ControlParams(1.0, 1.0), q)


def test_total_is_exactly_long_plus_short():
    rng = np.random.default_rng(11)
    for _ in range(200):
        i0, k, a, b = rng.uniform(0.1, 5.0, size=4)
        q = rng.uniform(0.2, 5.0)
        p = ControlParams(i0, k, a, b)
        assert gain_total_closed(p, q) == gain_long_closed(p, q) + gain_short_closed(p, q)


def test_sls_reduction_non_negative_and_zero_only_at_unit_ratio():
    # alpha = beta = 1 collapses to (i0/k)(q**k + q**-k - 2) >= 0
    rng = np.random.default_rng(12)
    for _ in range(500):
        i0 = rng.uniform(0.5, 2.0)
        k = rng.uniform(0.1, 5.0)
        q = rng.uniform(0.2, 5.0)
        p = ControlParams(i0, k)
        g = gain_total_closed(p, q)
        direct = i0 / k * (q**k + q**(-k) - 2.0)
        assert g == pytest.approx(direct, rel=1e-12, abs=1e-13)
        assert g >= 0.0
        if abs(q - 1.0) > 1e-6:
            assert g > 0.0
    assert gain_total_closed(ControlParams(1.0, 2.0), 1.0) == 0.0


def test_lower_bound_holds_when_condition_is_met():
    # g >= i0*(1-alpha)*ln q whenever (1-alpha)*ln q >= 0
    rng = np.random.default_rng(13)
    for _ in range(1000):
        i0 = rng.uniform(0.5, 2.0)
        k = rng.uniform(0.1, 5.0)
        b = rng.uniform(0.1, 5.0)
        a = rng.uniform(0.1, 5.0)
        q = rng.uniform(1.0, 5.0) if a < 1.0 else rng.uniform(0.2, 1.0)
        p = ControlParams(i0, k, a, b)
        assert positive_gain_condition(p, q)
        bound = i0 * (1.0 - a) * math.log(q)
        g = gain_total_closed(p, q)
        assert g >= bound - 1e-12
        assert g >= -1e-12


def test_positive_gain_condition_cases():
    assert positive_gain_condition(ControlParams(1.0, 1.0, alpha=1.0), 0.3)
    assert positive_gain_condition(ControlParams(1.0, 1.0, alpha=1.0), 7.0)
    assert positive_gain_condition(ControlParams(1.0, 1.0, alpha=0.5), 2.0)
    assert not positive_gain_condition(ControlParams(1.0, 1.0, alpha=0.5), 0.5)
    assert not positive_gain_condition(ControlParams(1.0, 1.0, alpha=2.0), 2.0)
    assert positive_gain_condition(ControlParams(1.0, 1.0, alpha=2.0), 0.5)


def test_condition_failure_admits_a_losing_parameterization():
    # alpha=2, q=2 violates the condition and k=0.5 indeed loses money
    p = ControlParams(1.0, 0.5, alpha=2.0)
    assert not positive_gain_condition(p, 2.0)
    g = gain_total_closed(p, 2.0)
    assert g == pytest.approx(-0.3431457505076194, rel=1e-14)
    assert g == pytest.approx(4.0 * math.sqrt(2.0) - 6.0, rel=1e-14)


def test_beta1_roots_alpha_one_collapses():
    r = beta1_roots(ControlParams(1.0, 1.0))
    assert r == Beta1Roots(1.0, 1.0, 1.0, 0.0)


def test_beta1_roots_values():
    r = beta1_roots(ControlParams(1.0, 2.0, alpha=4.0))
    assert r.q_root1 == 1.0
    assert r.q_root2 == pytest.approx(2.0, rel=1e-15)
    assert r.q_min == pytest.approx(1.4142135623730951, rel=1e-15)
    assert r.g_min == pytest.approx(-0.5, rel=1e-15)

    r = beta1_roots(ControlParams(1.0, 1.0, alpha=0.25))
    assert (r.q_root2, r.q_min, r.g_min) == pytest.approx((0.25, 0.5, -0.25), rel=1e-15)


def test_beta1_roots_agree_with_the_gain_curve():
    rng = np.random.default_rng(14)
    for _ in range(50):
        p = ControlParams(rng.uniform(0.5, 2.0), rng.uniform(0.2, 4.0), rng.uniform(0.2, 4.0))
        r = beta1_roots(p)
        assert gain_total_closed(p, r.q_root1) == pytest.approx(0.0, abs=1e-12)
        assert gain_total_closed(p, r.q_root2) == pytest.approx(0.0, abs=1e-12)
        g_at_min = gain_total_closed(p, r.q_min)
        assert g_at_min == pytest.approx(r.g_min, rel=1e-12, abs=1e-15)
        # local sampling around the claimed minimizer
        for dq in (-1e-4, 1e-4):
            assert gain_total_closed(p, r.q_min * (1.0 + dq)) >= g_at_min


def test_beta1_roots_requires_beta_one():
    with pytest.raises(ValueError):
        beta1_roots(ControlParams(1.0, 1.0, beta=2.0))


def test_partials_match_central_differences():
    h = 1e-6
    rng = np.random.default_rng(15)
    for _ in range(100):
        i0 = rng.uniform(0.5, 2.0)
        kl = rng.uniform(0.3, 4.0)
        ks = rng.uniform(0.3, 4.0)
        a = rng.uniform(0.3, 3.0)
        q = rng.uniform(0.3, 3.0)
        d_long, d_short = feedback_gain_partials(ControlParams(i0, kl, a, ks / kl), q)

        def g(kl_, ks_):
            return gain_total_closed(ControlParams(i0, kl_, a, ks_ / kl_), q)

        fd_long = (g(kl + h, ks) - g(kl - h, ks)) / (2.0 * h)
        fd_short = (g(kl, ks + h) - g(kl, ks - h)) / (2.0 * h)
        assert d_long == pytest.approx(fd_long, rel=1e-4, abs=1e-7)
        assert d_short == pytest.approx(fd_short, rel=1e-4, abs=1e-7)
        assert d_long >= -1e-12 and d_short >= -1e-12


def test_run_strategy_constant_prices():
    p = ControlParams(1.5, 2.0, alpha=0.5, beta=3.0)
    trace = run_strategy(p, np.full(10, 42.0))
    assert np.all(trace.gain == 0.0)
    assert np.all(trace.inv_long == 1.5)
    assert np.all(trace.inv_short == -0.75)
    assert np.all(trace.inv_net == 0.75)
    assert trace.final_gain == 0.0


def test_run_strategy_single_step_by_hand():
    # one 10% move: long book gains 0.1, short book loses 0.1
    trace = run_strategy(ControlParams(1.0, 1.0), [100.0, 110.0])
    assert trace.gain_long[-1] == pytest.approx(0.1, rel=1e-12)
    assert trace.gain_short[-1] == pytest.approx(-0.1, rel=1e-12)
    assert abs(trace.final_gain) < 1e-12
    assert trace.inv_long[-1] == pytest.approx(1.1, rel=1e-12)
    assert trace.inv_short[-1] == pytest.approx(-0.9, rel=1e-12)


def test_run_strategy_matches_gain_form_recurrence():
    # same update written on the gains instead of the investments
    rng = np.random.default_rng(16)
    prices = 100.0 * np.exp(np.cumsum(np.concatenate([[0.0], rng.normal(0, 0.01, 60)])))
    p = ControlParams(1.3, 0.8, alpha=1.7, beta=0.6)
    gl = gs = 0.0
    for n in range(len(prices) - 1):
        r = (prices[n + 1] - prices[n]) / prices[n]
        gl = gl + r * (p.i0 + p.k * gl)
        gs = gs + r * (-p.alpha * p.i0 - p.beta * p.k * gs)
    trace = run_strategy(p, prices)
    assert trace.gain_long[-1] == pytest.approx(gl, rel=1e-12)
    assert trace.gain_short[-1] == pytest.approx(gs, rel=1e-12)
    assert trace.final_gain == pytest.approx(gl + gs, rel=1e-12, abs=1e-15)


def test_run_strategy_converges_to_closed_form():
    # discretizing the same terminal ratio with more steps shrinks the error
    p = ControlParams(1.0, 1.0)
    q = 2.0
    target = gain_total_closed(p, q)
    errors = []
    for n in (1000, 8000):
        path = 100.0 * q ** (np.arange(n + 1) / n)
        errors.append(abs(run_strategy(p, path).final_gain - target))
    assert errors[1] < errors[0] / 4.0
    assert errors[1] / abs(target) < 1e-3


def test_run_strategy_batched_paths_match_individual_runs():
    rng = np.random.default_rng(17)
    prices = 100.0 * np.exp(np.cumsum(rng.normal(0, 0.01, size=(3, 40)), axis=1))
    p = ControlParams(1.0, 2.0, alpha=0.5, beta=1.5)
    batch = run_strategy(p, prices)
    assert batch.gain.shape == (3, 40)
    assert batch.final_gain.shape == (3,)
    for i in range(3):
        single = run_strategy(p, prices[i])
        np.testing.assert_array_equal(batch.gain[i], single.gain)
        np.testing.assert_array_equal(batch.inv_net[i], single.inv_net)


def test_run_strategy_times_argument():
    trace = run_strategy(ControlParams(1.0, 1.0), [1.0, 2.0], times=[0.0, 0.5])
    assert trace.times[-1] == 0.5
    with pytest.raises(ValueError):
        run_strategy(ControlParams(1.0, 1.0), [1.0, 2.0], times=[0.0, 0.5, 1.0])


@pytest.mark.parametrize("prices", [[], [100.0, -1.0], [100.0, 0.0], [100.0, math.nan], 5.0])
def test_run_strategy_rejects_bad_prices(prices):
    with pytest.raises(ValueError):
        run_strategy(ControlParams(1.0, 1.0), prices)
