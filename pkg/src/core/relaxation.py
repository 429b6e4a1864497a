"""
Hallucinated futures and the random component of the relaxation.

Rel(I_{1:t}) is the expectation over rho_t of

    R = gamma (T - t) - min_pi [ sum_{tau <= t} c_hat_tau(pi(x_tau))
                                 + sum_{tau > t} 2 Z_tau eps_tau(pi(x_tau)) ]

The learner acts on a single sampled rho_t per round; only the verifier
averages R over many rollouts.
"""
from typing import Optional, Sequence

import numpy as np

from .errors import InputError
from .oracle import ErmOracle, ErmQuery, ExhaustiveErmOracle, PastEntry
from .types import PolicyClass, Rollout


def sample_rollout(t: int, T: int, K: int, gamma: float, context_sampler,
                   rng: np.random.Generator, dense: bool = False) -> Rollout:
    """Draw rho_t = (x, eps, Z)_{t+1:T}.

    Each step draws x from the context distribution, then (one-hot) a uniform
    arm with a Rademacher sign or (dense) a Rademacher sign for every arm,
    and finally Z = K/gamma with probability gamma, else 0.

    Args:
        t: current round, 0 <= t <= T (t = 0 gives the full-horizon rollout).
        T: horizon.
        K: number of actions.
        gamma: exploration rate in (0, 1].
        context_sampler: object with `sample(rng, size)` returning context ids.
        rng: the run's rollout stream.
        dense: draw full Rademacher vectors instead of one-hot ones.
    """
    if not 0 <= t <= T:
        raise InputError(f"round {t} outside [0, {T}]")
    if not 0.0 < gamma <= 1.0:
        raise InputError(f"gamma must lie in (0, 1], got {gamma!r}")
    n = T - t
    scale = K / gamma
    if n == 0:
        return Rollout.empty(K, scale, dense=dense)
    contexts = context_sampler.sample(rng, n)
    if dense:
        dense_signs = 2 * rng.integers(0, 2, size=(n, K)) - 1
        z = np.where(rng.random(n) < gamma, scale, 0.0)
        return Rollout(contexts, z, K, scale, dense_signs=dense_signs)
    arms = rng.integers(0, K, size=n)
    signs = 2 * rng.integers(0, 2, size=n) - 1
    z = np.where(rng.random(n) < gamma, scale, 0.0)
    return Rollout(contexts, z, K, scale, arms, signs)


def relaxation_random_value(history: Sequence[PastEntry], rollout: Rollout, t: int, T: int,
                            gamma: float, oracle: Optional[ErmOracle] = None,
                            policy_class: Optional[PolicyClass] = None) -> float:
    """R((x, c_hat)_{1:t}, rho_t), using exactly one oracle call."""
    if len(history) != t:
        raise InputError(f"history has {len(history)} rounds, expected t = {t}")
    if len(rollout) != T - t:
        raise InputError(f"rollout has {len(rollout)} steps, expected T - t = {T - t}")
    if oracle is None:
        oracle = ExhaustiveErmOracle(policy_class)
    answer = oracle.value_of_erm(ErmQuery(past=history, future=rollout))
    return gamma * (T - t) - answer.value
