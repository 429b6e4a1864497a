"""
Environment side of one run: draws contexts and commits costs.
"""
import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..core.errors import InputError
from ..core.rng import RunStreams
from ..core.types import ActionDistribution, Context, CostVector, PolicyClass
from .adversaries import AdversaryHistory, AdversarySpec, adversary_cost, make_rule
from .contexts import ContextDistribution, sample_context

logger = logging.getLogger(__name__)

CostFeedback = Callable[[ActionDistribution], CostVector]


class Environment:
    """Context distribution plus adversary for a single run.

    The learner hands its q_t to the callable returned by `cost_feedback`;
    the adversary commits c_t there, before the learner samples y_t.
    """

    def __init__(self, context_dist: ContextDistribution, adversary: AdversarySpec,
                 policy_class: PolicyClass, K: int, streams: RunStreams):
        if context_dist.X != policy_class.X:
            raise InputError(f"context distribution has X={context_dist.X}, policy class has X={policy_class.X}")
        if policy_class.K != K:
            raise InputError(f"policy class has K={policy_class.K}, environment has K={K}")
        self.context_dist = context_dist
        self.adversary = adversary
        self.policy_class = policy_class
        self.K = K
        self.streams = streams
        self.rule = make_rule(adversary, policy_class)
        self.history: AdversaryHistory = []

    @property
    def rounds_played(self) -> int:
        return len(self.history)

    def next_context(self) -> Context:
        return sample_context(self.context_dist, self.streams.context)

    def cost_feedback(self, t: int, x_t: Context) -> CostFeedback:
        """Return a one-shot callable committing c_t for round t given q_t."""
        if t != self.rounds_played + 1:
            raise InputError(f"round {t} requested after {self.rounds_played} committed rounds")

        def commit(q_t: ActionDistribution) -> CostVector:
            if self.rounds_played != t - 1:
                raise InputError(f"costs for round {t} were already committed")
            costs = adversary_cost(self.adversary, t, self.history, x_t, q_t,
                                   rng=self.streams.adversary, rule=self.rule)
            if costs.K != self.K:
                raise InputError(f"adversary produced {costs.K} costs, expected K={self.K}")
            if self.rule is not None:
                self.rule.observe(x_t, costs)
            self.history.append((x_t, costs, q_t))
            return costs

        return commit


def constant_cost_adversary(T: int, K: int, value: float = 0.5) -> AdversarySpec:
    """Every action costs `value` in every round; regret is identically zero."""
    return AdversarySpec.fixed_sequence(np.full((T, K), value), name=f"constant_{value:g}")


@dataclass(frozen=True, eq=False)
class EnvironmentSpec:
    """Everything needed to rebuild an environment for any seed."""
    context_dist: ContextDistribution
    adversary: AdversarySpec
    policy_class: PolicyClass

    @property
    def K(self) -> int:
        return self.policy_class.K

    @property
    def X(self) -> int:
        return self.policy_class.X

    def build(self, streams: RunStreams) -> Environment:
        return Environment(self.context_dist, self.adversary, self.policy_class, self.K, streams)
