"""
Value-of-ERM oracle over a finite policy class.

Given past estimated costs, an optional spike at the current context and a
hallucinated future, the oracle returns the smallest cumulative cost any
policy in the class achieves, together with the lowest-index minimiser.
"""
from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .errors import ConfigurationError, InputError, ValidationError
from .types import Context, CostLike, CostVector, Policy, PolicyClass, Rollout

logger = logging.getLogger(__name__)

PastEntry = Tuple[Context, CostLike]


@dataclass(frozen=True)
class ErmQuery:
    """Arguments of one oracle call.

    Attributes:
        past: (context, cost) pairs for rounds already played.
        spike_override: (action, value) added at `current_context`, or None.
        future: hallucinated rollout contributing 2 * z * epsilon terms.
        current_context: context x_t the spike is placed at.
    """
    past: Sequence[PastEntry] = field(default_factory=tuple)
    spike_override: Optional[Tuple[int, float]] = None
    future: Optional[Rollout] = None
    current_context: Optional[Context] = None

    def __post_init__(self):
        if self.spike_override is not None and self.current_context is None:
            raise ValidationError("a spike override needs a current context")


@dataclass(frozen=True)
class ErmAnswer:
    value: float
    argmin_policy: int


class ErmOracle(ABC):
    """Oracle interface; `calls` counts every value_of_erm invocation."""

    def __init__(self, policy_class: PolicyClass):
        self.policy_class = policy_class
        self.calls = 0

    @abstractmethod
    def policy_costs(self, query: ErmQuery) -> np.ndarray:
        """Cumulative query cost of every policy, shape (|Pi|,). Not counted."""

    def value_of_erm(self, query: ErmQuery) -> ErmAnswer:
        totals = self.policy_costs(query)
        self.calls += 1
        best = int(np.argmin(totals))
        return ErmAnswer(float(totals[best]), best)


class ExhaustiveErmOracle(ErmOracle):
    """Exact oracle enumerating the whole policy class.

    Two caches keep a round at O(|Pi| (T - t) + K |Pi|):
      * running per-policy past cost for the history list last seen; the
        list may only grow by appending between calls.
      * per-policy future sum of the rollout last seen (keyed by identity),
        shared by all K + 1 queries of a round.
    """

    def __init__(self, policy_class: PolicyClass, use_cache: bool = True):
        super().__init__(policy_class)
        self.use_cache = use_cache
        self._past_owner = None
        self._past_len = 0
        self._past_last = None
        self._past_totals = np.zeros(policy_class.size)
        self._future_owner = None
        self._future_totals = None

    def _check_context(self, context: Context):
        if not 0 <= context.id < self.policy_class.X:
            raise InputError(f"context {context.id} outside universe of size {self.policy_class.X}")

    def _add_entry(self, totals: np.ndarray, entry: PastEntry):
        context, cost = entry
        self._check_context(context)
        if isinstance(cost, CostVector) or not cost.is_zero:
            totals += cost.to_array(self.policy_class.K)[self.policy_class.actions_at(context.id)]

    def _past_costs(self, past: Sequence[PastEntry]) -> np.ndarray:
        n = len(past)
        hit = (
            self.use_cache
            and past is self._past_owner
            and n >= self._past_len
            and (self._past_len == 0 or past[self._past_len - 1] is self._past_last)
        )
        if hit:
            totals = self._past_totals
            start = self._past_len
        else:
            if self.use_cache and n:
                logger.debug("past-cost cache miss, summing %d rounds from scratch", n)
            totals = np.zeros(self.policy_class.size)
            start = 0
        for entry in past[start:]:
            self._add_entry(totals, entry)
        if self.use_cache:
            self._past_owner = past
            self._past_len = n
            self._past_last = past[n - 1] if n else None
            self._past_totals = totals
        return totals

    def _future_costs(self, future: Optional[Rollout]) -> np.ndarray:
        if future is None or len(future) == 0:
            return np.zeros(self.policy_class.size)
        if self.use_cache and future is self._future_owner:
            return self._future_totals
        if future.K != self.policy_class.K:
            raise InputError(f"rollout has K={future.K}, policy class has K={self.policy_class.K}")
        if future.contexts.max() >= self.policy_class.X:
            raise InputError("rollout context outside the policy class universe")
        n = len(future)
        actions = self.policy_class.tables[:, future.contexts]
        eps = future.epsilon()[np.arange(n)[None, :], actions]
        totals = (2.0 * future.z[None, :] * eps).sum(axis=1)
        if self.use_cache:
            self._future_owner = future
            self._future_totals = totals
        return totals

    def policy_costs_of_past(self, past: Sequence[PastEntry]) -> np.ndarray:
        """Per-policy cumulative past cost; not counted as an oracle call."""
        return self._past_costs(past).copy()

    def policy_costs(self, query: ErmQuery) -> np.ndarray:
        past = self._past_costs(query.past)
        spike = np.zeros(self.policy_class.size)
        if query.spike_override is not None:
            self._check_context(query.current_context)
            action, value = query.spike_override
            spike = np.where(self.policy_class.actions_at(query.current_context.id) == action, value, 0.0)
        future = self._future_costs(query.future)
        return past + spike + future


def _as_policy_class(policy_class: Union[PolicyClass, Sequence[Policy], None]) -> PolicyClass:
    if policy_class is None or len(policy_class) == 0:
        raise ConfigurationError("the policy class is empty")
    if isinstance(policy_class, PolicyClass):
        return policy_class
    return PolicyClass.from_policies(list(policy_class))


def value_of_erm(query: ErmQuery, policy_class: Union[PolicyClass, Sequence[Policy]]) -> ErmAnswer:
    """One uncached oracle call against a policy class."""
    return ExhaustiveErmOracle(_as_policy_class(policy_class), use_cache=False).value_of_erm(query)


def _cost_matrix(contexts: Sequence[Context], true_costs: Sequence[CostVector],
                 policy_class: PolicyClass) -> np.ndarray:
    if len(contexts) != len(true_costs):
        raise InputError(f"{len(contexts)} contexts but {len(true_costs)} cost vectors")
    T = len(contexts)
    if T == 0:
        return np.zeros((policy_class.size, 0))
    xs = np.array([c.id for c in contexts], dtype=np.int64)
    if xs.min() < 0 or xs.max() >= policy_class.X:
        raise InputError("context outside the policy class universe")
    C = np.stack([c.to_array(policy_class.K) for c in true_costs])
    return C[np.arange(T)[None, :], policy_class.tables[:, xs]]


def best_fixed_policy_cost(contexts: Sequence[Context], true_costs: Sequence[CostVector],
                           policy_class: Union[PolicyClass, Sequence[Policy]]) -> Tuple[float, int]:
    """Cost of the best policy in hindsight, lowest index on ties."""
    policy_class = _as_policy_class(policy_class)
    totals = _cost_matrix(contexts, true_costs, policy_class).sum(axis=1)
    best = int(np.argmin(totals))
    return float(totals[best]), best


def benchmark_prefix_costs(contexts: Sequence[Context], true_costs: Sequence[CostVector],
                           policy_class: PolicyClass) -> np.ndarray:
    """min over Pi of sum_{s <= t} c_s(pi(x_s)) for every prefix t, shape (T,)."""
    per_round = _cost_matrix(contexts, true_costs, policy_class)
    if per_round.shape[1] == 0:
        return np.zeros(0)
    return np.cumsum(per_round, axis=1).min(axis=0)
