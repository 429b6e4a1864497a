"""
Desk-scale acceptance runs. Deselect with -m "not slow".
"""
import numpy as np
import pytest

from src.core.episode import run_episode
from src.core.learners import LearnerSpec, default_gamma
from src.data.policy_generator import complete_policy_class, random_policy_class
from src.envs.adversaries import AdversarySpec
from src.envs.contexts import ContextDistribution
from src.envs.environment import EnvironmentSpec
from src.verify.checks import (Instance, check_admissibility_step, check_final_condition, check_rademacher_bound,
                               check_regret_bound, check_relaxation_certificate)
from src.verify.stats import RunningStats

pytestmark = pytest.mark.slow

ADVERSARIES = ('punish_the_mode', 'punish_above_uniform', 'best_policy_chaser')


@pytest.mark.parametrize('K', [2, 4])
def test_exploration_floor_across_episodes(K):
    pc = random_policy_class(8, 3, K, seed=K)
    dist = ContextDistribution.uniform(3)
    gamma = default_gamma(200, K, pc.size)
    spec = LearnerSpec('relax', 'relax')
    for seed in range(50):
        env = EnvironmentSpec(dist, AdversarySpec.adaptive(ADVERSARIES[seed % 3]), pc)
        trace, _ = run_episode(spec, env, 200, seed)
        assert min(r.q.floor for r in trace) >= gamma / K - 1e-12
        assert all(r.oracle_calls == K + 1 for r in trace)


@pytest.mark.parametrize('T', [2, 3])
@pytest.mark.parametrize('pi_size', [2, 4])
def test_admissibility_and_final_condition_on_tiny_instances(T, pi_size):
    pc = complete_policy_class(2, 2) if pi_size == 4 else random_policy_class(2, 2, 2, seed=1)
    instance = Instance(pc, ContextDistribution.uniform(2), T, gamma=0.5)
    rng = np.random.default_rng(T * 10 + pi_size)
    for t in range(1, T + 1):
        report = check_admissibility_step(instance, t, 20_000, 20_000, rng)
        assert report.passed, report.to_dict()
    for _ in range(5):
        assert check_final_condition(instance, 10_000, rng).passed


@pytest.mark.parametrize('K', [2, 4])
@pytest.mark.parametrize('T', [64, 256])
@pytest.mark.parametrize('gamma', [0.3, 0.6])
def test_rademacher_grid(K, T, gamma):
    pc = random_policy_class(8, 4, K, seed=3)
    report = check_rademacher_bound(T, K, pc, gamma, 10_000, np.random.default_rng(K * T))
    assert report.passed


def test_regret_bound_end_to_end():
    pc = complete_policy_class(2, 2)
    instance = Instance(pc, ContextDistribution.uniform(2), T=2048)
    report = check_regret_bound(instance, instance.resolved_gamma, n_seeds=50, jobs=4)
    assert report.passed, report.details


def test_regret_scaling():
    pc = complete_policy_class(2, 2)
    dist = ContextDistribution.uniform(2)
    env = EnvironmentSpec(dist, AdversarySpec.adaptive('punish_the_mode'), pc)
    means = {}
    for T in (512, 4096):
        stats = RunningStats().extend([run_episode(LearnerSpec('relax', 'relax'), env, T, seed)[1].expected_regret
                                       for seed in range(20)])
        means[T] = stats.mean
    assert means[512] > 0
    assert means[4096] / means[512] <= 5.0


def test_relaxation_certificate_on_a_tiny_instance():
    instance = Instance(complete_policy_class(2, 2), ContextDistribution.uniform(2), T=3, gamma=0.5)
    report = check_relaxation_certificate(instance, n_seeds=200, n_samples=1000, rng=np.random.default_rng(0))
    assert report.exact
    assert report.passed, report.details
