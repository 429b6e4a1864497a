import numpy as np
import pytest

from src.core.errors import ContractError, InputError
from src.core.estimator import check_exploration_floor, estimate_cost, spike_probability
from src.core.types import ActionDistribution, EstimatedCost


def test_zero_loss_never_spikes(rng):
    q = ActionDistribution([0.5, 0.5])
    for _ in range(50):
        assert estimate_cost(0.0, 1, q, 0.5, 2, rng) == EstimatedCost.ZERO


def test_certain_spike_has_height_k_over_gamma(rng):
    q = ActionDistribution([0.5, 0.5])
    assert spike_probability(1.0, 0, q, 1.0, 2) == pytest.approx(1.0)
    estimate = estimate_cost(1.0, 0, q, 1.0, 2, rng)
    assert estimate.action == 0
    assert estimate.value == 2.0


def test_floor_violation_is_a_contract_error(rng):
    q = ActionDistribution([0.9, 0.1])
    with pytest.raises(ContractError):
        check_exploration_floor(q, 0.5, 2)
    with pytest.raises(ContractError):
        estimate_cost(0.5, 0, q, 0.5, 2, rng)


def test_argument_ranges(rng):
    q = ActionDistribution([0.5, 0.5])
    with pytest.raises(InputError):
        estimate_cost(1.5, 0, q, 0.5, 2, rng)
    with pytest.raises(InputError):
        estimate_cost(0.5, 0, q, 0.0, 2, rng)
    with pytest.raises(InputError):
        estimate_cost(0.5, 2, q, 0.5, 2, rng)


def test_one_draw_per_round():
    q = ActionDistribution([0.5, 0.5])
    a, b = np.random.default_rng(9), np.random.default_rng(9)
    estimate_cost(0.0, 0, q, 0.5, 2, a)
    b.random()
    assert a.random() == b.random()


def test_spike_mass_per_arm_is_capped():
    K, gamma = 3, 0.3
    q = ActionDistribution([0.5, 0.3, 0.2])
    for arm in range(K):
        # worst case observed = 1
        assert q[arm] * spike_probability(1.0, arm, q, gamma, K) == pytest.approx(gamma / K)


@pytest.mark.slow
def test_estimator_is_unbiased():
    K, gamma = 3, 0.3
    q = ActionDistribution([0.5, 0.3, 0.2])
    c = np.array([0.6, 0.2, 0.9])
    rng = np.random.default_rng(2024)
    n = 1_000_000
    actions = rng.choice(K, size=n, p=q.probs)
    draws = np.empty((n, K))
    for i, y in enumerate(actions):
        draws[i] = estimate_cost(c[y], int(y), q, gamma, K, rng).to_array(K)
    mean = draws.mean(axis=0)
    se = draws.std(axis=0, ddof=1) / np.sqrt(n)
    assert np.all(np.abs(mean - c) <= 3 * se)

    support = np.unique(draws)
    assert set(support.tolist()) <= {0.0, K / gamma}
    assert np.all((draws > 0).sum(axis=1) <= 1)
    spike_freq = (draws > 0).mean(axis=0)
    assert np.all(spike_freq <= gamma / K)
