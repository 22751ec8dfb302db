"""Smoke tests for the python bindings (run against the CMake-built module)."""

import math

import pytest

levyht = pytest.importorskip("levyht")


def test_simulators():
    p = levyht.simulate_bm_drift(drift=1.0, vol=0.0, horizon=1.0, dt=0.01, seed=1)
    assert p.terminal() == pytest.approx(1.0, abs=1e-12)

    spec = levyht.JumpMeasureSpec.exponential(2.0, 0.5)
    cp = levyht.simulate_compound_poisson(spec, horizon=5.0, seed=3)
    assert all(b >= a for a, b in zip(cp.values, cp.values[1:]))

    pair = levyht.simulate_levy2d(
        [0.5, -0.5], levyht.Sigma2(1.0, 0.0, 1.0),
        (levyht.JumpMeasureSpec.zero(), levyht.JumpMeasureSpec.zero()),
        horizon=1.0, dt=0.01, seed=7)
    assert len(pair.times) == len(pair.values1) == len(pair.values2)


def test_determinism():
    a = levyht.simulate_bm_drift(drift=0.1, vol=1.0, horizon=1.0, dt=0.01, seed=42)
    b = levyht.simulate_bm_drift(drift=0.1, vol=1.0, horizon=1.0, dt=0.01, seed=42)
    assert a.values == b.values


def test_thresholds_and_decision():
    a11 = levyht.induce_fourth_alpha(0.05, 0.05, 0.10)
    errors = levyht.ErrorSpec(0.05, 0.05, 0.10, a11)
    lo, hi = levyht.l1_feasible_interval(0.05, 0.10)
    rect = levyht.solve_rectangle(errors, 0.5 * (lo + hi))
    assert rect.l1 < 0 < rect.r1

    with pytest.raises(ArithmeticError):
        levyht.induce_fourth_alpha(0.2, 0.05, 0.05)

    assert levyht.exit_probability_oracle_1d(0.5, 1.0, -1.0, 1.0) == pytest.approx(
        1 / (1 + math.exp(-1)), abs=1e-12)


def test_llr_and_generators():
    nu = levyht.JumpMeasureSpec.exponential(1.0, 1.0)
    co = levyht.jump_llr_coefficients(levyht.JumpTestParams(1.0, 1.0, nu), 1)
    assert co.beta == pytest.approx(-(2 - 3 / math.e), abs=1e-8)

    ch = levyht.jump_llr_characteristics(co, 1)
    val = levyht.generator_from_characteristics(ch, ch, 0.0, levyht.tf_x1(), 0.0, 0.0)
    assert math.isfinite(val)

    res = levyht.dynkin_residual(ch, ch, 0.0, levyht.tf_x1(), 0.0, 0.0,
                                 t_small=1e-3, n_mc=20000, seed=5)
    assert abs(res.estimate) < 3 * res.standard_error + 0.05


def test_envelopes():
    coeffs = levyht.EnvelopeCoeffs(0.9, 0.9, 0.16, 0.21, 0.5, 0.45, 0.0, 1.0, 0.05, True)
    params = levyht.EnvelopeParams(coeffs, levyht.Rectangle(-1, 1, -1, 1),
                                   levyht.WorldIndex(0, 0))
    corner = levyht.eval_envelopes(params, -1.0, -1.0)
    assert corner.lower == pytest.approx(1.0, abs=1e-12)
    assert corner.upper == pytest.approx(1.0, abs=1e-12)
    mid = levyht.eval_envelopes(params, 0.0, 0.0)
    assert 0.0 <= mid.lower <= mid.upper


def test_monte_carlo_stats():
    tp = levyht.DriftTestPair(levyht.DriftTestParams(1.0, 1.0), levyht.DriftTestParams(1.0, 1.0))
    st = levyht.monte_carlo_operating_stats(
        levyht.WorldIndex(1, 1), tp, levyht.Rectangle(-1, 1, -1, 1),
        levyht.McOptions(n_paths=2000, seed=9, threads=2))
    p_right = st.delta_freq[2] + st.delta_freq[3]
    assert p_right == pytest.approx(0.731, abs=0.04)


def test_oil_experiment():
    cfg = levyht.OilConfig()
    cfg.a = 19.0
    cfg.l = -0.03
    cfg.alpha0 = 0.9
    cfg.alpha_is_confidence = True
    cfg.kform = levyht.KForm.Pushforward
    cfg.nu = levyht.JumpMeasureSpec.exponential(0.65445831, 0.46332453)
    rep = levyht.run_oil_experiment(levyht.FitResult(0.0238, 11.419), cfg)
    assert rep.r == pytest.approx(0.3769, abs=5e-3)
    assert rep.right_exits + rep.left_exits + rep.censored == 30
