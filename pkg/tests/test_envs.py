import numpy as np
import pytest

from src.core.errors import ConfigurationError, ContractError, InputError, ValidationError
from src.core.rng import make_streams
from src.core.types import ActionDistribution, Context, CostVector
from src.envs.adversaries import (AdaptiveRule, AdversaryKind, AdversarySpec, BestPolicyChaser, PunishAboveUniform,
                                  PunishTheMode, adversary_cost, load_cost_sequence)
from src.envs.contexts import ContextDistribution, sample_context
from src.envs.environment import Environment, EnvironmentSpec, constant_cost_adversary


def test_point_mass_context_distribution(rng):
    dist = ContextDistribution([0.0, 1.0])
    assert all(sample_context(dist, rng).id == 1 for _ in range(20))
    assert ContextDistribution([1.0]).sample(rng, 5).tolist() == [0] * 5


def test_context_distribution_validation():
    with pytest.raises(ValidationError):
        ContextDistribution([0.5, 0.6])
    with pytest.raises(ValidationError):
        ContextDistribution([-0.5, 1.5])


def test_fixed_sequence_returns_stored_rows():
    spec = AdversarySpec.fixed_sequence([[0.1, 0.9], [0.4, 0.6]])
    q = ActionDistribution.uniform(2)
    assert adversary_cost(spec, 2, [], Context(0), q) == CostVector([0.4, 0.6])
    with pytest.raises(InputError):
        adversary_cost(spec, 3, [], Context(0), q)


def test_fixed_sequence_rejects_out_of_range_costs():
    with pytest.raises(ValidationError):
        AdversarySpec.fixed_sequence([[0.1, 1.9]])


def test_stochastic_adversary_noise_laws(rng):
    means = [[0.2, 0.8], [0.5, 0.5]]
    q = ActionDistribution.uniform(2)
    exact = AdversarySpec.stochastic(means, noise='none')
    assert adversary_cost(exact, 1, [], Context(1), q) == CostVector([0.5, 0.5])
    noisy = AdversarySpec.stochastic(means)
    draws = np.array([adversary_cost(noisy, 1, [], Context(0), q, rng=rng).costs for _ in range(2000)])
    assert set(np.unique(draws)) <= {0.0, 1.0}
    np.testing.assert_allclose(draws.mean(axis=0), [0.2, 0.8], atol=0.05)
    with pytest.raises(ValidationError):
        AdversarySpec.stochastic(means, noise='gaussian')


def test_punish_the_mode(crossed_class):
    rule = PunishTheMode(crossed_class)
    assert rule.cost(1, [], Context(0), ActionDistribution([0.2, 0.5, 0.3])).tolist() == [0.0, 1.0, 0.0]
    assert rule.cost(1, [], Context(0), ActionDistribution([0.5, 0.5])).tolist() == [1.0, 0.0]


def test_punish_above_uniform(crossed_class):
    rule = PunishAboveUniform(crossed_class)
    assert rule.cost(1, [], Context(0), ActionDistribution([0.6, 0.4])).tolist() == [1.0, 0.0]
    assert rule.cost(1, [], Context(0), ActionDistribution([0.5, 0.5])).tolist() == [0.0, 0.0]


def test_best_policy_chaser_follows_the_leader(crossed_class):
    rule = BestPolicyChaser(crossed_class)
    q = ActionDistribution.uniform(2)
    # both policies tie: policy 0 plays 0 at context 0
    assert rule.cost(1, [], Context(0), q).tolist() == [1.0, 0.0]
    rule.observe(Context(0), CostVector([1.0, 0.0]))
    # policy 1 now leads and plays 1 at context 0
    assert rule.cost(2, [], Context(0), q).tolist() == [0.0, 1.0]


class Overshoot(AdaptiveRule):
    def cost(self, t, history, x_t, q_t):
        return np.full(q_t.K, 2.0)


def test_invalid_rule_output_is_a_contract_error(crossed_class):
    spec = AdversarySpec.adaptive('punish_the_mode')
    with pytest.raises(ContractError):
        adversary_cost(spec, 1, [], Context(0), ActionDistribution.uniform(2), rule=Overshoot(crossed_class))


def test_unknown_rule_is_rejected():
    with pytest.raises(ValidationError):
        AdversarySpec.adaptive('nonsense')
    assert AdversarySpec.adaptive('punish_the_mode').kind is AdversaryKind.ADAPTIVE


def test_check_dimensions():
    spec = AdversarySpec.fixed_sequence(np.zeros((3, 2)))
    spec.check_dimensions(3, 2, 5)
    with pytest.raises(ConfigurationError):
        spec.check_dimensions(4, 2, 5)
    with pytest.raises(ConfigurationError):
        spec.check_dimensions(3, 3, 5)
    with pytest.raises(ConfigurationError):
        AdversarySpec.stochastic([[0.5, 0.5]]).check_dimensions(3, 2, 2)


def test_load_cost_sequence(tmp_path):
    path = tmp_path / 'costs.csv'
    path.write_text("0.1,0.2\n0.5,1.0\n")
    spec = load_cost_sequence(path, 2)
    assert spec.name == 'costs'
    assert spec.costs.shape == (2, 2)


def test_load_cost_sequence_names_the_bad_row(tmp_path):
    path = tmp_path / 'costs.csv'
    path.write_text("0.1,0.2\n0.5,1.5\n")
    with pytest.raises(ValidationError, match='row 2'):
        load_cost_sequence(path, 2)
    with pytest.raises(ValidationError, match='columns'):
        load_cost_sequence(path, 3)


def test_load_cost_sequence_missing_file(tmp_path):
    with pytest.raises(ConfigurationError):
        load_cost_sequence(tmp_path / 'absent.csv', 2)


def test_environment_commits_once_per_round(crossed_class, uniform2):
    env = Environment(uniform2, AdversarySpec.adaptive('punish_the_mode'), crossed_class, 2, make_streams(0, 0))
    x = env.next_context()
    commit = env.cost_feedback(1, x)
    costs = commit(ActionDistribution([0.7, 0.3]))
    assert costs == CostVector([1.0, 0.0])
    assert env.rounds_played == 1
    assert env.history[0][0] == x
    with pytest.raises(InputError):
        commit(ActionDistribution([0.7, 0.3]))
    with pytest.raises(InputError):
        env.cost_feedback(3, x)


def test_environment_checks_universe(crossed_class):
    with pytest.raises(InputError):
        Environment(ContextDistribution.uniform(3), constant_cost_adversary(2, 2), crossed_class, 2,
                    make_streams(0, 0))


def test_environment_context_stream_depends_only_on_seed(crossed_class, uniform2):
    spec = EnvironmentSpec(uniform2, constant_cost_adversary(10, 2), crossed_class)
    a = spec.build(make_streams(3, 4))
    b = spec.build(make_streams(3, 4))
    assert [a.next_context() for _ in range(10)] == [b.next_context() for _ in range(10)]
