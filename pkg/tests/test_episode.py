from dataclasses import replace

import numpy as np
import pytest

from src.core.episode import regret_report, run_episode
from src.core.errors import ConfigurationError, InputError
from src.core.learners import LearnerSpec
from src.core.rng import check_rng, make_streams
from src.envs.adversaries import AdversarySpec
from src.envs.environment import EnvironmentSpec, constant_cost_adversary

RELAX = LearnerSpec('relax', 'relax', {'gamma': 0.5})
EXP4 = LearnerSpec('exp4', 'exp4', {'gamma': 0.5})


@pytest.fixture
def mode_env(four_policy_class, uniform2):
    return EnvironmentSpec(uniform2, AdversarySpec.adaptive('punish_the_mode'), four_policy_class)


def test_constant_costs_have_zero_regret(four_policy_class, uniform2):
    env = EnvironmentSpec(uniform2, constant_cost_adversary(12, 2, 0.5), four_policy_class)
    trace, report = run_episode(RELAX, env, 12, seed=0)
    assert len(trace) == 12
    assert report.expected_regret == pytest.approx(0.0, abs=1e-9)
    assert report.realized_regret == pytest.approx(0.0, abs=1e-9)
    np.testing.assert_allclose(report.cum_expected_regret, 0.0, atol=1e-9)


def test_zero_costs_never_spike(four_policy_class, uniform2):
    env = EnvironmentSpec(uniform2, constant_cost_adversary(8, 2, 0.0), four_policy_class)
    trace, report = run_episode(RELAX, env, 8, seed=1)
    assert all(r.estimate.is_zero for r in trace)
    assert report.expected_regret == 0.0
    assert report.benchmark == 0.0


def test_relaxation_episode_spends_k_plus_one_calls(mode_env):
    trace, report = run_episode(RELAX, mode_env, 10, seed=0)
    assert [r.oracle_calls for r in trace] == [3] * 10
    assert report.oracle_calls == 30
    assert report.T == 10
    assert report.cum_expected_regret[-1] == pytest.approx(report.expected_regret)


def test_episode_is_reproducible(mode_env):
    first, a = run_episode(RELAX, mode_env, 10, seed=5, master_seed=9)
    second, b = run_episode(RELAX, mode_env, 10, seed=5, master_seed=9)
    assert [r.action for r in first] == [r.action for r in second]
    assert a.expected_regret == b.expected_regret


def test_learners_share_contexts_under_one_seed(mode_env):
    relax, _ = run_episode(RELAX, mode_env, 15, seed=2)
    exp4, _ = run_episode(EXP4, mode_env, 15, seed=2)
    assert [r.context for r in relax] == [r.context for r in exp4]


def test_regret_report_matches_hand_computation(crossed_class, uniform2):
    costs = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
    env = EnvironmentSpec(uniform2, AdversarySpec.fixed_sequence(costs), crossed_class)
    trace, report = run_episode(EXP4, env, 3, seed=0)
    expected = sum(float(np.dot(r.q.probs, c)) for r, c in zip(trace, costs))
    assert report.expected_regret == pytest.approx(expected - report.benchmark)
    assert regret_report(trace, crossed_class).benchmark == report.benchmark


def test_short_fixed_sequence_is_rejected(crossed_class, uniform2):
    env = EnvironmentSpec(uniform2, AdversarySpec.fixed_sequence(np.zeros((2, 2))), crossed_class)
    with pytest.raises(ConfigurationError):
        run_episode(RELAX, env, 3, seed=0)
    with pytest.raises(InputError):
        run_episode(RELAX, env, 0, seed=0)


def test_streams_are_distinct():
    streams = make_streams(0, 0)
    draws = {name: getattr(streams, name).random() for name in ('context', 'adversary', 'rollout',
                                                                 'action', 'estimator')}
    assert len(set(draws.values())) == 5
    assert check_rng(0, 0).random() != make_streams(0, 0).context.random()


def test_expected_regret_ignores_the_sampled_actions(crossed_class, uniform2):
    costs = np.array([[1.0, 0.0], [0.0, 1.0], [0.8, 0.1], [0.3, 0.9]])
    env = EnvironmentSpec(uniform2, AdversarySpec.fixed_sequence(costs), crossed_class)
    trace, report = run_episode(RELAX, env, 4, seed=3)
    flipped = [replace(r, action=1 - r.action, observed_cost=r.costs[1 - r.action]) for r in trace]
    other = regret_report(flipped, crossed_class)
    assert other.expected_regret == report.expected_regret
    np.testing.assert_array_equal(other.cum_expected_regret, report.cum_expected_regret)
    assert other.realized_regret != report.realized_regret
