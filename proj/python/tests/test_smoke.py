"""Smoke tests for the python bindings."""

import json
import math

import pytest

import mpp


def test_cake_solve_reproduces_the_betting_payoffs():
    cake = mpp.cake_problem()
    assert mpp.validate(cake) == []
    result = mpp.pareto_solve(cake, [0.5, 0.5])
    assert result.payoff == pytest.approx([27.0, 27.0], abs=1e-9)
    # red -> all-none, green -> none-all
    assert result.policy.distribution(mpp.History([0], [])) == [1.0, 0.0, 0.0]
    assert result.policy.distribution(mpp.History([1], [])) == [0.0, 0.0, 1.0]


def test_even_split_evaluates_to_twenty_each():
    cake = mpp.cake_problem()
    half = mpp.cake_half_half()
    for j in range(2):
        assert mpp.evaluate(cake.principal(j), half) == pytest.approx(20.0, abs=1e-9)


def test_problem_json_round_trip():
    cake = mpp.cake_problem()
    text = cake.to_json()
    reloaded = mpp.problem_from_json(text)
    assert mpp.instance_hash(reloaded) == mpp.instance_hash(cake)
    assert reloaded.action_labels == ["all-none", "half-half", "none-all"]


def test_frontier_contains_the_five_cake_payoffs():
    cake = mpp.cake_problem()
    points = mpp.frontier_sweep(cake, 101)
    payoffs = sorted((round(p.payoff[0], 6), round(p.payoff[1], 6)) for p in points)
    assert payoffs == [(0.0, 30.0), (18.0, 29.0), (27.0, 27.0), (29.0, 18.0), (30.0, 0.0)]
    csv = mpp.frontier_csv(points)
    assert csv.splitlines()[0] == "w1,w2,payoff1,payoff2,policy_id"


def test_verify_pareto_flags_the_even_split():
    cake = mpp.cake_problem()
    assert mpp.verify_pareto(cake, [27.0, 27.0]).pareto_optimal
    verdict = mpp.verify_pareto(cake, [20.0, 20.0])
    assert not verdict.pareto_optimal
    assert verdict.witness == pytest.approx([27.0, 27.0], abs=1e-9)


def test_prop1_reports_the_impossibility():
    cake = mpp.cake_problem()
    report = mpp.prop1_verify(cake, [27.0, 27.0], r_grid=101)
    assert report["impossibility_confirmed"] is True
    assert report["mode"] == "prop1"
    rs = [entry["r"] for entry in report["entries"]]
    assert any(abs(r - 1.0 / 3.0) < 1e-15 for r in rs)


def test_effective_weights_after_red():
    cake = mpp.cake_problem()
    posterior = mpp.effective_weights(cake, [0.5, 0.5], mpp.History([0], []))
    assert posterior.weights == pytest.approx([0.9, 0.1], abs=1e-9)
    at_start = mpp.effective_weights(cake, [0.5, 0.5], mpp.History([], []))
    assert at_start.weights == [0.5, 0.5]


def test_simulation_is_reproducible_and_reports_aggregate():
    cake = mpp.cake_problem()
    policy = mpp.cake_pi_hat()
    a = mpp.simulate(cake, [0.5, 0.5], mpp.MIXTURE_GENERATOR, policy, 7, 25)
    b = mpp.simulate(cake, [0.5, 0.5], mpp.MIXTURE_GENERATOR, policy, 7, 25)
    assert [t.states for t in a] == [t.states for t in b]
    assert all(t.model_tag in (0, 1) for t in a)

    report = mpp.bet_settling_report(cake, [0.5, 0.5], policy, mpp.MIXTURE_GENERATOR, 7, 200)
    assert report["count"] == 200
    assert sum(g["trajectories"] for g in report["per_model"]) == 200


def test_exact_martingale_under_the_mixture():
    cake = mpp.cake_problem()
    means = mpp.exact_mean_effective_weights(
        cake, [0.5, 0.5], mpp.cake_pi_hat(), mpp.MIXTURE_GENERATOR
    )
    assert means[0] == pytest.approx([0.5, 0.5], abs=1e-9)


def test_mixture_payoff_decomposes():
    cake = mpp.cake_problem()
    mixture = mpp.build_mixture(cake, [0.3, 0.7])
    policy = mpp.cake_pi_hat()
    want = 0.3 * mpp.evaluate(cake.principal(0), policy) + 0.7 * mpp.evaluate(
        cake.principal(1), policy
    )
    assert mpp.evaluate(mixture.pomdp, policy) == pytest.approx(want, abs=1e-9)


def test_policy_json_round_trip():
    cake = mpp.cake_problem()
    text = mpp.policy_to_json(mpp.cake_pi_hat(), cake)
    parsed = json.loads(text)
    assert parsed["red"]["all-none"] == 1.0
    policy = mpp.policy_from_json(text, cake)
    assert mpp.evaluate(cake.principal(0), policy) == pytest.approx(27.0, abs=1e-9)


def test_size_cap_raises():
    cake = mpp.cake_problem()
    with pytest.raises(RuntimeError):
        mpp.pareto_solve(cake, [0.5, 0.5], cap=2)


def test_bad_weights_raise():
    cake = mpp.cake_problem()
    with pytest.raises(ValueError):
        mpp.pareto_solve(cake, [0.5, -0.5])


def test_causal_probability_and_joint():
    cake = mpp.cake_problem()
    assert mpp.causal_obs_probability(cake.principal(0), [0], []) == pytest.approx(0.9)
    outcome = mpp.Outcome([0, 2], [0], [0])
    assert mpp.joint_probability(cake.principal(0), outcome, mpp.cake_pi_hat()) == (
        pytest.approx(0.9)
    )


def test_naive_solve_matches_the_fixed_weight_analysis():
    cake = mpp.cake_problem()
    forced = mpp.naive_solve(cake, 0.2)
    assert forced.payoff == pytest.approx([0.0, 30.0], abs=1e-9)
    split = mpp.naive_solve(cake, 0.5)
    assert split.payoff == pytest.approx([20.0, 20.0], abs=1e-9)
    overridden = mpp.naive_solve(cake, 1.0 / 3.0, {0: 2, 1: 2})
    assert overridden.payoff[0] == pytest.approx(0.0, abs=1e-9)


def test_brute_force_payoffs_has_nine_rows():
    cake = mpp.cake_problem()
    points = mpp.brute_force_payoffs(cake)
    assert len(points) == 9
    assert [27.0, 27.0] in [[round(x, 6) for x in p] for p in points]
