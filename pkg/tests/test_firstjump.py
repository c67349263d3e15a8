import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cogarch import (
    LevySpec,
    ParamSet,
    TwoPointJumps,
    build_scheme,
    garch_recursion,
    h,
    innovations,
    path_from_jumps,
    refinement_study,
)


def test_scheme_construction(levy):
    scheme = build_scheme(levy, horizon=10.0, dt=0.1)
    assert scheme.n_cells == 100
    assert scheme.threshold == pytest.approx(0.1 ** (1.0 / 3.0))
    assert np.all(scheme.xi > 0)
    assert np.all(scheme.mu == 0.0)  # symmetric jump law
    assert scheme.vanishing_product < 0.1


def test_scheme_warns_when_coarse():
    spec = LevySpec.compound_poisson(rate=40.0, normalize=False)
    with pytest.warns(RuntimeWarning, match="first-jump approximation may be poor"):
        build_scheme(spec, horizon=10.0, dt=0.5)


def test_scheme_threshold_cap(levy):
    scheme = build_scheme(levy, horizon=10.0, dt=2.5)
    assert scheme.threshold == 1.0


def test_scheme_rejects_unreachable_threshold():
    spec = LevySpec.compound_poisson(rate=1.0, jumps=TwoPointJumps(1.0), normalize=False)
    with pytest.raises(ValueError):
        build_scheme(spec, horizon=10.0, dt=0.1, threshold=1.0)


def test_first_exceedance_scaling_mc_oracle(levy):
    # frozen MC oracle (1e6 draws of the first-exceedance variable per
    # cell, rate 1, dt=0.1, m=0.1^(1/3), seed 2718):
    #   mu = -0.000110 (se 3.07e-4), xi^2 = 0.09395519 (se 5.28e-4)
    scheme = build_scheme(levy, horizon=1.0, dt=0.1)
    assert abs(scheme.mu[0] - 0.0) < 3 * 3.07e-4
    assert abs(scheme.xi[0] ** 2 - 0.09395519) < 3 * 5.28e-4


def test_innovations_no_exceedance(levy):
    scheme = build_scheme(levy, horizon=1.0, dt=0.5)
    # all jumps below the threshold: epsilon = -mu/xi = 0 for symmetric laws
    eps = innovations([0.2, 0.7], [0.01, -0.02], scheme)
    assert np.array_equal(eps, -scheme.mu / scheme.xi)
    assert np.all(eps == 0.0)


def test_innovations_pick_first_exceedance(levy):
    scheme = build_scheme(levy, horizon=1.0, dt=0.5, threshold=0.5)
    eps = innovations([0.1, 0.2, 0.3, 0.8], [0.1, -2.0, 3.0, 0.9], scheme)
    # cell 1: first jump above 0.5 is -2.0 (3.0 arrives later); cell 2: 0.9
    assert eps[0] == pytest.approx((-2.0 - scheme.mu[0]) / scheme.xi[0])
    assert eps[1] == pytest.approx((0.9 - scheme.mu[1]) / scheme.xi[1])


def test_innovations_tiny_threshold_recovers_jumps(levy):
    # one jump per cell and a vanishing threshold: eps is the jump itself
    # scaled by xi
    with pytest.warns(RuntimeWarning):
        scheme = build_scheme(levy, horizon=3.0, dt=1.0, threshold=1e-9)
    jumps = np.array([0.6, -1.1, 0.4])
    eps = innovations([0.5, 1.5, 2.5], jumps, scheme)
    assert np.allclose(eps * scheme.xi + scheme.mu, jumps)


def test_recursion_zero_innovations(params):
    times = np.linspace(0.0, 5.0, 11)
    eps = np.zeros(10)
    g, s2 = garch_recursion(eps, params, times, sigma2_0=2.0)
    assert np.all(g == 0.0)
    dt = 0.5
    v = 2.0
    for i in range(10):
        v = params.theta * dt + math.exp(-params.eta * dt) * v
        assert s2[i] == pytest.approx(v, rel=1e-14)


def test_recursion_positivity(params):
    rng = np.random.default_rng(8)
    times = np.linspace(0.0, 50.0, 501)
    eps = rng.standard_normal(500)
    g, s2 = garch_recursion(eps, params, times, sigma2_0=0.0)
    assert np.all(s2 > 0)


def test_recursion_symmetric_reduction(levy):
    # at gamma = 0 the update factor collapses to (1 + phi*dt*eps^2)
    p = ParamSet(theta=0.04, eta=0.053, phi=0.04, gamma=0.0)
    rng = np.random.default_rng(3)
    times = np.linspace(0.0, 10.0, 101)
    eps = rng.standard_normal(100)
    g, s2 = garch_recursion(eps, p, times, sigma2_0=1.0)
    dt = 0.1
    v = 1.0
    damp = math.exp(-p.eta * dt)
    e_prev = 0.0
    for i in range(100):
        v = p.theta * dt + (1.0 + p.phi * dt * e_prev * e_prev) * damp * v
        e_prev = eps[i]
        assert s2[i] == pytest.approx(v, rel=1e-12)


def test_recursion_rejects_bad_inputs(params):
    with pytest.raises(ValueError):
        garch_recursion([0.1], params, [0.0, 0.5, 1.0], sigma2_0=1.0)
    with pytest.raises(ValueError):
        garch_recursion([0.1, 0.2], params, [0.0, 0.5, 1.0], sigma2_0=-1.0)


@settings(max_examples=60, deadline=None)
@given(st.floats(-4.0, 4.0), st.floats(0.0, 0.95))
def test_sign_asymmetry_matches_kernel(e, gamma):
    # the indicator branch in the variance update is exactly h(eps)
    mult = (1.0 - gamma) ** 2 if e > 0 else (1.0 + gamma) ** 2 if e < 0 else (1.0 - gamma) ** 2
    assert mult * e * e == pytest.approx(h(e, gamma), rel=1e-12, abs=1e-300)


def test_sign_asymmetry_in_recursion(params):
    # a negative innovation must raise the variance more than an equal
    # positive one, by the factor ((1+gamma)/(1-gamma))^2 on the feedback
    times = np.array([0.0, 1.0, 2.0])
    g_pos, s2_pos = garch_recursion([2.0, 0.0], params, times, sigma2_0=1.0)
    g_neg, s2_neg = garch_recursion([-2.0, 0.0], params, times, sigma2_0=1.0)
    damp = math.exp(-params.eta)
    base = params.theta + damp * s2_pos[0]
    feed_pos = s2_pos[1] - base
    feed_neg = s2_neg[1] - (params.theta + damp * s2_neg[0])
    assert s2_pos[0] == s2_neg[0]
    assert feed_neg / feed_pos == pytest.approx((1.3 / 0.7) ** 2, rel=1e-12)


def test_refinement_errors_decrease(params, levy):
    # small version of the convergence study: errors shrink as the mesh
    # and threshold shrink together
    recs = refinement_study(params, levy, 10.0, [0.5, 0.05], n_paths=60, seed=99)
    assert recs[1]["err_sigma2"] < recs[0]["err_sigma2"]
    assert recs[1]["err_g"] < recs[0]["err_g"]


def test_recursion_approaches_exact_path(params, levy):
    # with a fixed driver path, refining the partition drives the
    # discrete terminal state to the exact one
    horizon = 10.0
    times, sizes = levy.sample_jumps(horizon, seed=606)
    sigma2_0 = 2.0
    exact = path_from_jumps(params, times, sizes, horizon, sigma2_0)
    errs = []
    for dt in (0.5, 0.05, 0.005):
        scheme = build_scheme(levy, horizon=horizon, dt=dt)
        eps = innovations(times, sizes, scheme)
        g, s2 = garch_recursion(eps, params, scheme.times, sigma2_0)
        errs.append(abs(s2[-1] - exact.sigma2_at(horizon)) + abs(g[-1] - exact.g_at(horizon)))
    assert errs[2] < errs[0]
