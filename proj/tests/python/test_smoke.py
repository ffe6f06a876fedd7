"""Smoke tests for the python bindings: a few known values and a short
end-to-end tune/simulate round trip."""

import math

import pytest

import ctrldiss


def paper_scenario(load=1.0):
    scenario = ctrldiss.ScenarioParams(
        arrival_rate=1.0,
        expiry_rate=0.01,
        capacity=1000,
        element_bits=16,
        churn_rate=0.001,
        neighbor_ber=[6.6e-6],
        relevance_threshold=0.95,
    )
    return scenario.with_load(load)


def test_message_loss_anchor():
    assert 0.095 < ctrldiss.message_loss_prob(6.6e-6, 1000, 16) < 0.105
    assert ctrldiss.message_loss_prob(0.0, 500, 16) == 0.0


def test_distributions_normalize():
    total = sum(ctrldiss.deletion_dist(d, 30, 0.05) for d in range(31))
    assert total == pytest.approx(1.0, abs=1e-12)
    bound = 20 + 3 - 10
    total = sum(ctrldiss.addition_dist(n, 10, 3, 2.5, 20) for n in range(bound + 1))
    assert total == pytest.approx(1.0, abs=1e-12)


def test_invalid_arguments_raise():
    with pytest.raises(Exception):
        ctrldiss.message_loss_prob(1.5, 10, 16)
    with pytest.raises(Exception):
        ctrldiss.ScenarioParams(
            arrival_rate=1.0,
            expiry_rate=0.0,
            capacity=10,
            element_bits=8,
            churn_rate=0.0,
            neighbor_ber=[0.0],
        )


def test_stationary_mean_matches_light_traffic():
    scenario = ctrldiss.ScenarioParams(
        arrival_rate=1.0,
        expiry_rate=0.1,
        capacity=50,
        element_bits=8,
        churn_rate=0.0,
        neighbor_ber=[0.0],
    )
    pi = ctrldiss.stationary_distribution(scenario)
    # Far below capacity the chain behaves like an infinite-server queue.
    assert pi.mean() == pytest.approx(1.0 / -math.expm1(-0.1), rel=1e-3)


def test_n_max_anchor():
    assert ctrldiss.n_max(0.001, 1, 0.95) == 100
    assert ctrldiss.n_max(0.2, 50, 0.95) == 0


def test_tune_and_reports_agree():
    scenario = paper_scenario(load=1.0)
    result = ctrldiss.tune(scenario)
    assert result.feasible
    assert result.n_max == 100
    assert result.best.full_dump_period <= 100
    report = ctrldiss.analytic_report(scenario, result.best)
    assert report.relevance_all >= 0.95
    assert report.control_volume == pytest.approx(result.best_volume, rel=1e-12)

    asym = ctrldiss.tune(scenario, mode=ctrldiss.TuneMode.ASYMPTOTIC)
    assert asym.feasible
    assert asym.best_volume == pytest.approx(result.best_volume, rel=0.10)


def test_simulation_matches_model():
    scenario = paper_scenario(load=0.5)
    protocol = ctrldiss.ProtocolParams(
        ctrldiss.Strategy.INCREMENTAL,
        full_dump_period=50,
        full_dump_retries=2,
        diff_retries=2,
    )
    model = ctrldiss.analytic_report(scenario, protocol)
    sim = ctrldiss.simulate(scenario, protocol, horizon=30000, runs=4, seed=7)
    assert sim.mean_volume == pytest.approx(model.control_volume, rel=0.05)
    assert sim.mean_relevance >= model.relevance_all - 0.03
    again = ctrldiss.simulate(scenario, protocol, horizon=30000, runs=4, seed=7)
    assert again.mean_volume == sim.mean_volume
    assert again.mean_relevance == sim.mean_relevance
