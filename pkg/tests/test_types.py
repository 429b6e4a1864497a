import numpy as np
import pytest

from src.core.errors import InputError, ValidationError
from src.core.types import (ActionDistribution, Context, CostVector, EstimatedCost, HallucinationStep, Policy,
                            PolicyClass, Rollout, policy_action, validate_distribution)


def test_context_rejects_negative_and_out_of_universe():
    with pytest.raises(ValidationError):
        Context(-1)
    with pytest.raises(ValidationError):
        Context(3, universe=3)
    assert Context(2, universe=3).id == 2


def test_cost_vector_must_lie_in_unit_cube():
    with pytest.raises(ValidationError):
        CostVector([0.5, 1.2])
    with pytest.raises(ValidationError):
        CostVector([-0.1, 0.0])
    c = CostVector([0.0, 1.0])
    assert c.K == 2
    assert c[1] == 1.0


def test_cost_vector_length_check():
    with pytest.raises(ValidationError):
        CostVector([0.1, 0.2]).to_array(3)


def test_policy_action_and_out_of_range_context():
    policy = Policy([1, 0, 1], 2)
    assert policy_action(policy, Context(0)) == 1
    assert policy_action(policy, Context(1)) == 0
    with pytest.raises(InputError):
        policy_action(policy, Context(5))


def test_policy_class_shape_and_actions():
    pc = PolicyClass.from_policies([Policy([0, 1], 2), Policy([1, 1], 2)])
    assert (pc.size, pc.X, pc.K) == (2, 2, 2)
    assert pc.actions_at(0).tolist() == [0, 1]
    assert pc[1] == Policy([1, 1], 2)
    with pytest.raises(ValidationError):
        PolicyClass(np.array([[0, 2]]), 2)


def test_validate_distribution_absorbs_small_drift():
    q = validate_distribution([0.5, 0.5 + 1e-12])
    assert q.probs.sum() == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValidationError):
        validate_distribution([0.6, 0.6])
    with pytest.raises(ValidationError):
        validate_distribution([1.1, -0.1])


def test_action_distribution_expected_cost_and_floor():
    q = ActionDistribution([0.25, 0.75])
    assert q.expected_cost(CostVector([1.0, 0.0])) == pytest.approx(0.25)
    assert q.floor == 0.25
    assert ActionDistribution.uniform(4).probs.tolist() == [0.25] * 4


def test_estimated_cost_spike_and_zero():
    spike = EstimatedCost.spike(1, K=2, gamma=0.5)
    assert spike.value == 4.0
    assert spike.to_array(2).tolist() == [0.0, 4.0]
    assert EstimatedCost.ZERO.is_zero
    assert EstimatedCost.ZERO.to_array(3).tolist() == [0.0, 0.0, 0.0]
    with pytest.raises(ValidationError):
        EstimatedCost(None, 1.0)
    with pytest.raises(ValidationError):
        spike.check_scale(2, 0.25)


def test_rollout_epsilon_is_one_hot():
    steps = [HallucinationStep(Context(0), 1, -1, 4.0), HallucinationStep(Context(1), 0, 1, 0.0)]
    rollout = Rollout.from_steps(steps, K=2, scale=4.0)
    assert len(rollout) == 2
    assert rollout.epsilon().tolist() == [[0.0, -1.0], [1.0, 0.0]]
    assert rollout.steps[0] == steps[0]


def test_rollout_rejects_other_scales():
    with pytest.raises(ValidationError):
        Rollout([0], [3.0], 2, 4.0, [0], [1])
    with pytest.raises(ValidationError):
        HallucinationStep(Context(0), 0, 0, 4.0)


def test_dense_rollout_uses_every_sign():
    rollout = Rollout([0], [2.0], 2, 2.0, dense_signs=[[1, -1]])
    assert rollout.dense
    assert rollout.epsilon().tolist() == [[1.0, -1.0]]
    assert Rollout.empty(3, 6.0, dense=True).dense
