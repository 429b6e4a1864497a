"""
Episode runner: plays one learner against one environment for T rounds.
"""
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..envs.environment import EnvironmentSpec
from .errors import InputError
from .learners import LearnerSpec, build_learner
from .oracle import benchmark_prefix_costs, best_fixed_policy_cost
from .rng import make_streams
from .types import PolicyClass, RoundRecord

logger = logging.getLogger(__name__)

Trace = List[RoundRecord]


@dataclass(frozen=True, eq=False)
class RegretReport:
    """Regret of one episode against the best fixed policy in hindsight.

    Attributes:
        expected_regret: sum_t <q_t, c_t> - benchmark.
        realized_regret: sum_t c_t(y_t) - benchmark.
        benchmark: min over the policy class of sum_t c_t(pi(x_t)).
        best_policy: lowest-index minimiser of the benchmark.
        cum_expected_regret: expected regret of every prefix, shape (T,).
        oracle_calls: total value-of-ERM calls over the episode.
    """
    expected_regret: float
    realized_regret: float
    benchmark: float
    best_policy: int
    cum_expected_regret: np.ndarray
    oracle_calls: int

    @property
    def T(self) -> int:
        return int(self.cum_expected_regret.size)


def regret_report(trace: Sequence[RoundRecord], policy_class: PolicyClass) -> RegretReport:
    """Compute expected and realised regret from a trace."""
    contexts = [r.context for r in trace]
    costs = [r.costs for r in trace]
    benchmark, best = best_fixed_policy_cost(contexts, costs, policy_class)
    expected = np.array([r.expected_cost for r in trace])
    realized = np.array([r.observed_cost for r in trace])
    prefix = benchmark_prefix_costs(contexts, costs, policy_class)
    return RegretReport(
        expected_regret=float(expected.sum() - benchmark),
        realized_regret=float(realized.sum() - benchmark),
        benchmark=benchmark,
        best_policy=best,
        cum_expected_regret=np.cumsum(expected) - prefix,
        oracle_calls=int(sum(r.oracle_calls for r in trace)),
    )


def run_episode(learner_spec: LearnerSpec, env_spec: EnvironmentSpec, T: int, seed: int,
                master_seed: int = 0) -> Tuple[Trace, RegretReport]:
    """Play T rounds and score them.

    The environment streams depend only on (master_seed, seed), so every
    learner run under the same seed faces the same contexts and, for
    non-adaptive adversaries, the same costs.
    """
    if T < 1:
        raise InputError(f"horizon must be at least 1, got T={T}")
    env_spec.adversary.check_dimensions(T, env_spec.K, env_spec.X)
    streams = make_streams(master_seed, seed)
    env = env_spec.build(streams)
    learner = build_learner(learner_spec, env_spec.policy_class, T, streams, context_dist=env_spec.context_dist)
    logger.debug("Episode start: learner=%s adversary=%s seed=%d T=%d",
                 learner_spec.name, env_spec.adversary.name, seed, T)

    for t in range(1, T + 1):
        x_t = env.next_context()
        learner.play_round(x_t, env.cost_feedback(t, x_t))

    trace = list(learner.records)
    report = regret_report(trace, env_spec.policy_class)
    logger.debug("Episode done: learner=%s seed=%d expected regret %.4f",
                 learner_spec.name, seed, report.expected_regret)
    return trace, report
