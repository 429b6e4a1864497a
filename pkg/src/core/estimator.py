"""
Discretised unbiased cost estimator.

From the single observed loss c_t(y_t) the estimator emits either the zero
vector or a spike of height K/gamma on the chosen action. The spike fires
with probability gamma * c_t(y_t) / (K q_t(y_t)), so that
E[c_hat_t(i)] = c_t(i) over y_t ~ q_t and the coin.
"""
import numpy as np

from .config import FLOOR_TOLERANCE
from .errors import ContractError, InputError
from .types import ActionDistribution, EstimatedCost


def spike_probability(observed: float, chosen: int, q: ActionDistribution, gamma: float, K: int) -> float:
    """Probability that the estimate is a spike rather than zero."""
    return gamma * observed / (K * q[chosen])


def check_exploration_floor(q: ActionDistribution, gamma: float, K: int):
    """Raise ContractError unless min_i q(i) >= gamma/K (up to FLOOR_TOLERANCE)."""
    if q.K != K:
        raise ContractError(f"distribution over {q.K} actions, expected {K}")
    if q.floor < gamma / K - FLOOR_TOLERANCE:
        raise ContractError(
            f"exploration floor violated: min q = {q.floor!r} < gamma/K = {gamma / K!r}"
        )


def estimate_cost(observed: float, chosen: int, q: ActionDistribution, gamma: float, K: int,
                  rng: np.random.Generator) -> EstimatedCost:
    """Form c_hat_t from the observed loss of the chosen action.

    The coin is always drawn, even when the spike probability is zero, so the
    estimator stream advances by exactly one draw per round.

    Args:
        observed: c_t(chosen), in [0, 1].
        chosen: the sampled action y_t.
        q: distribution y_t was drawn from; must respect the gamma/K floor.
        gamma: exploration rate in (0, 1].
        K: number of actions.
        rng: the run's estimator stream.

    Returns:
        EstimatedCost.ZERO or a spike of K/gamma on `chosen`.
    """
    if not 0.0 <= observed <= 1.0:
        raise InputError(f"observed cost {observed!r} outside [0, 1]")
    if not 0.0 < gamma <= 1.0:
        raise InputError(f"gamma must lie in (0, 1], got {gamma!r}")
    if not 0 <= chosen < K:
        raise InputError(f"chosen action {chosen} outside [0, {K})")
    check_exploration_floor(q, gamma, K)
    p = spike_probability(observed, chosen, q, gamma, K)
    if rng.random() < p:
        return EstimatedCost.spike(chosen, K, gamma)
    return EstimatedCost.ZERO
