"""Smoke tests for the compiled extension: a few known values and contracts.

The CMake build stages the package under <build>/python; ctest points
PYTHONPATH there.
"""

import math

import pytest

import seqweight as sw


def test_version():
    assert sw.__version__


def test_wllr_and_price():
    assert sw.wllr(1.2, 1.0) == pytest.approx(1.2, abs=0)
    assert sw.wllr(-0.5, 2.0) == pytest.approx(-0.5 + math.log(2), rel=1e-14)

    w = sw.WeightVector([0.5, 1.0, 1.0, 2.0, 4.0])
    assert sw.price_of_weighting(2, w) == 21.0
    assert sw.price_of_weighting_bruteforce(2, w) == 21.0
    assert sw.price_of_weighting(2, sw.WeightVector.ones(5)) == 6.0
    assert sw.price_of_weighting(0, w) == 0.0

    with pytest.raises(ValueError):
        sw.WeightVector([1.0, -1.0])


def test_calibration_values():
    c = sw.calibrate_gap(0.05, 20, sw.WeightVector.ones(200)).c
    assert c == pytest.approx(abs(math.log(0.05)) + math.log(3600), rel=1e-14)

    th = sw.calibrate_gi(0.05, 0.05, 0, 10, sw.WeightVector.ones(10))
    assert th.a == pytest.approx(abs(math.log(0.025)) + math.log(10), rel=1e-14)
    assert th.b == pytest.approx(th.a, rel=1e-14)
    assert th.c is None
    assert th.d is None


def test_run_gap_decision():
    models = [sw.StreamModel.gaussian_mean(8.0)] * 3
    truth = sw.TruthAssignment(3, [2])
    weights = sw.WeightVector.ones(3)
    cfg = sw.GapConfig(1, sw.calibrate_gap(0.05, 1, weights), weights)
    decision = sw.run_gap(models, truth, cfg, sw.Rng(5), 1000)
    assert decision.rejected == [2]
    assert decision.stop_time >= 1
    assert decision.fired_rule == sw.FiredRule.Gap

    replay = sw.run_gap(models, truth, cfg, sw.Rng(5), 1000)
    assert replay.stop_time == decision.stop_time
    assert replay.rejected == decision.rejected


def test_scenario_roundtrip():
    spec = sw.ScenarioSpec("smoke", num_streams=10, signal_fraction=0.1, mu=0.5,
                           reps=200, master_seed=11)
    result = sw.run_scenario(spec, 2)
    again = sw.run_scenario(spec, 1)
    assert result.ess == again.ess
    assert result.fwe1 == again.fwe1
    assert result.fwe1 <= 0.05 + 3 * math.sqrt(0.05 * 0.95 / 200)
    assert result.reps == 200
    assert result.m == 1

    csv = sw.summary_csv([result])
    assert csv.startswith("scenario,J,m,alpha,beta,eta,r,reps,ess,")
    assert csv.count("\n") == 2


def test_generated_weights_mean_one():
    truth = sw.TruthAssignment(40, list(range(4)))
    spec = sw.WeightGenSpec(eta=20.0, r=5.0, signal_fraction=0.1)
    w = sw.generate_weights(spec, truth, sw.Rng(3))
    assert sum(w.values) / len(w) == pytest.approx(1.0, abs=1e-14)


def test_oracle_suites():
    assert sw.verify_price_closed_form(8, 50, sw.Rng(1)).passed()
    assert sw.verify_gi_maxima(8, 25, sw.Rng(2)).passed()
    assert sw.verify_gap_step_agreement(20, 500, sw.Rng(3)).passed()
