"""
Online learners for the contextual bandit loop.

Every learner follows the same round template: propose q_t from its own
state, hand q_t to the environment (which commits c_t), sample y_t ~ q_t,
turn the observed loss into an estimate and append it to the history.
The environment never sees y_t before c_t is fixed.
"""
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from scipy.special import logsumexp

from .config import LEARNER_DEFAULTS, RELAXATION_LEARNERS
from .errors import ConfigurationError, ContractError, InputError
from .estimator import estimate_cost
from .oracle import ErmOracle, ErmQuery, ExhaustiveErmOracle, PastEntry
from .relaxation import sample_rollout
from .rng import RunStreams
from .strategy import compute_strategy
from .types import ActionDistribution, Context, CostVector, EstimatedCost, PolicyClass, RoundRecord, validate_distribution

logger = logging.getLogger(__name__)

CostFeedback = Callable[[ActionDistribution], Any]


class LearnerKind(Enum):
    RELAX = "relax"
    FULL_RADEMACHER = "full_rademacher"
    EXP4 = "exp4"
    EPSILON_GREEDY = "epsilon_greedy"


@dataclass(frozen=True)
class LearnerSpec:
    """Named learner with its hyperparameters."""
    name: str
    kind: str
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in LEARNER_DEFAULTS:
            raise ConfigurationError(f"unknown learner kind {self.kind!r}; expected one of {sorted(LEARNER_DEFAULTS)}")
        unknown = set(self.params) - set(LEARNER_DEFAULTS[self.kind])
        if unknown:
            raise ConfigurationError(f"learner {self.name!r} got unknown parameters {sorted(unknown)}")

    def resolved_params(self) -> Dict[str, Any]:
        merged = dict(LEARNER_DEFAULTS[self.kind])
        merged.update(self.params)
        return merged

    @property
    def is_relaxation(self) -> bool:
        return self.kind in RELAXATION_LEARNERS


def default_gamma(T: int, K: int, pi_size: float) -> float:
    """Exploration rate min(1, (4 K ln|Pi| / T)^(1/3)).

    Warns when T <= 4 K ln|Pi|, where the regret guarantee no longer applies.

    Raises:
        InputError: T < 1, K < 1 or pi_size < 2.
    """
    if T < 1:
        raise InputError(f"horizon must be at least 1, got T={T}")
    if K < 1:
        raise InputError(f"need at least one action, got K={K}")
    if pi_size < 2:
        raise InputError(f"default gamma needs |Pi| >= 2 (ln|Pi| > 0), got {pi_size}")
    log_pi = math.log(pi_size)
    if T <= 4 * K * log_pi:
        logger.warning("T=%d <= 4 K ln|Pi| = %.3f: regret guarantee does not apply", T, 4 * K * log_pi)
    return min(1.0, (4.0 * K * log_pi / T) ** (1.0 / 3.0))


def _check_gamma(gamma: float) -> float:
    if not 0.0 < gamma <= 1.0:
        raise ConfigurationError(f"gamma must lie in (0, 1], got {gamma!r}")
    return float(gamma)


class Learner(ABC):
    """Shared round template and history bookkeeping.

    `history` is the list of (x_tau, c_hat_tau) pairs the oracle sums over;
    it only ever grows by appending.
    """

    kind: LearnerKind

    def __init__(self, policy_class: PolicyClass, T: int, streams: RunStreams,
                 oracle: Optional[ErmOracle] = None):
        if T < 1:
            raise InputError(f"horizon must be at least 1, got T={T}")
        self.policy_class = policy_class
        self.K = policy_class.K
        self.T = T
        self.streams = streams
        self.oracle = oracle if oracle is not None else ExhaustiveErmOracle(policy_class)
        self.history: List[PastEntry] = []
        self.records: List[RoundRecord] = []

    @property
    def t(self) -> int:
        """Rounds completed so far."""
        return len(self.records)

    @abstractmethod
    def propose(self, t: int, x_t: Context) -> Tuple[ActionDistribution, float]:
        """Return q_t and the exploration rate the estimator should use."""

    def update(self, x_t: Context, estimate: EstimatedCost):
        self.history.append((x_t, estimate))

    def play_round(self, x_t: Context, env_cost_feedback: CostFeedback,
                   streams: Optional[RunStreams] = None) -> RoundRecord:
        streams = streams or self.streams
        t = self.t + 1
        if t > self.T:
            raise InputError(f"round {t} beyond horizon T={self.T}")
        calls_before = self.oracle.calls
        q, gamma_round = self.propose(t, x_t)
        oracle_calls = self.oracle.calls - calls_before

        costs = self._committed_costs(env_cost_feedback(q))
        action = int(streams.action.choice(self.K, p=q.probs))
        observed = costs[action]
        if gamma_round > 0.0:
            estimate = estimate_cost(observed, action, q, gamma_round, self.K, streams.estimator).check_scale(
                self.K, gamma_round)
        else:
            estimate = EstimatedCost.ZERO
        self.update(x_t, estimate)

        record = RoundRecord(t, x_t, q, action, observed, estimate, oracle_calls, costs)
        self.records.append(record)
        logger.debug("round %d: x=%d q=%s y=%d c=%.3f est=%s calls=%d",
                     t, x_t.id, np.round(q.probs, 4).tolist(), action, observed, estimate.kind, oracle_calls)
        return record

    def _committed_costs(self, raw) -> CostVector:
        if isinstance(raw, CostVector):
            values = raw.costs
        else:
            values = np.asarray(raw, dtype=float)
        if values.shape != (self.K,) or not np.all(np.isfinite(values)) \
                or values.min() < 0.0 or values.max() > 1.0:
            raise ContractError(f"environment returned cost {np.atleast_1d(values).tolist()} outside [0, 1]^{self.K}")
        return raw if isinstance(raw, CostVector) else CostVector(values)


class RelaxBanditLearner(Learner):
    """Random-playout relaxation learner: K + 1 oracle calls per round."""

    kind = LearnerKind.RELAX
    dense = False

    def __init__(self, policy_class: PolicyClass, T: int, streams: RunStreams, context_dist,
                 gamma: Optional[float] = None, oracle: Optional[ErmOracle] = None):
        super().__init__(policy_class, T, streams, oracle)
        if context_dist is None:
            raise ConfigurationError("the relaxation learner needs the context distribution to hallucinate futures")
        self.context_dist = context_dist
        self.gamma = _check_gamma(gamma if gamma is not None else default_gamma(T, self.K, policy_class.size))

    def propose(self, t, x_t):
        rollout = sample_rollout(t, self.T, self.K, self.gamma, self.context_dist,
                                 self.streams.rollout, dense=self.dense)
        q, _, _ = compute_strategy(self.history, rollout, x_t, self.gamma, self.K, self.oracle)
        return q, self.gamma


class FullRademacherLearner(RelaxBanditLearner):
    """Same pipeline with a Rademacher sign on every arm of every future step."""

    kind = LearnerKind.FULL_RADEMACHER
    dense = True


class Exp4Learner(Learner):
    """Exponential weights over the policy class; no oracle calls.

    Weights are kept as normalised log-weights so long runs never underflow.
    """

    kind = LearnerKind.EXP4

    def __init__(self, policy_class: PolicyClass, T: int, streams: RunStreams,
                 gamma: Optional[float] = None, learning_rate: Optional[float] = None,
                 oracle: Optional[ErmOracle] = None):
        super().__init__(policy_class, T, streams, oracle)
        self.gamma = _check_gamma(gamma if gamma is not None else default_gamma(T, self.K, policy_class.size))
        if learning_rate is None:
            learning_rate = math.sqrt(math.log(policy_class.size) / (T * self.K))
        if learning_rate < 0.0:
            raise ConfigurationError(f"learning rate must be non-negative, got {learning_rate!r}")
        self.learning_rate = float(learning_rate)
        self.log_weights = np.full(policy_class.size, -math.log(policy_class.size))

    def weights(self) -> np.ndarray:
        return np.exp(self.log_weights - logsumexp(self.log_weights))

    def propose(self, t, x_t):
        vote = np.bincount(self.policy_class.actions_at(x_t.id), weights=self.weights(), minlength=self.K)
        return validate_distribution((1.0 - self.gamma) * vote + self.gamma / self.K), self.gamma

    def update(self, x_t, estimate):
        super().update(x_t, estimate)
        if estimate.is_zero:
            return
        losses = estimate.to_array(self.K)[self.policy_class.actions_at(x_t.id)]
        self.log_weights = self.log_weights - self.learning_rate * losses
        self.log_weights -= logsumexp(self.log_weights)


class EpsilonGreedyLearner(Learner):
    """Uniform warm start, then follow the ERM policy with epsilon-uniform exploration."""

    kind = LearnerKind.EPSILON_GREEDY

    def __init__(self, policy_class: PolicyClass, T: int, streams: RunStreams,
                 epsilon: float = 0.1, warm_start: int = 0, oracle: Optional[ErmOracle] = None):
        super().__init__(policy_class, T, streams, oracle)
        if not 0.0 <= epsilon <= 1.0:
            raise ConfigurationError(f"epsilon must lie in [0, 1], got {epsilon!r}")
        if warm_start < 0:
            raise ConfigurationError(f"warm start must be non-negative, got {warm_start}")
        self.epsilon = float(epsilon)
        self.warm_start = int(warm_start)

    def propose(self, t, x_t):
        if t <= self.warm_start:
            return ActionDistribution.uniform(self.K), 1.0
        leader = self.oracle.value_of_erm(ErmQuery(past=self.history)).argmin_policy
        q = np.full(self.K, self.epsilon / self.K)
        q[self.policy_class.tables[leader, x_t.id]] += 1.0 - self.epsilon
        return validate_distribution(q), self.epsilon


def _play(state: Learner, expected: type, x_t: Context, env_cost_feedback: CostFeedback,
          rng: Optional[RunStreams]) -> RoundRecord:
    if type(state) is not expected:
        raise InputError(f"expected a {expected.__name__}, got {type(state).__name__}")
    return state.play_round(x_t, env_cost_feedback, rng)


def relax_bandit_round(state: RelaxBanditLearner, x_t: Context, env_cost_feedback: CostFeedback,
                       rng: Optional[RunStreams] = None) -> RoundRecord:
    """One round of the relaxation learner with a one-hot hallucinated future."""
    return _play(state, RelaxBanditLearner, x_t, env_cost_feedback, rng)


def full_rademacher_round(state: FullRademacherLearner, x_t: Context, env_cost_feedback: CostFeedback,
                          rng: Optional[RunStreams] = None) -> RoundRecord:
    return _play(state, FullRademacherLearner, x_t, env_cost_feedback, rng)


def exp4_round(state: Exp4Learner, x_t: Context, env_cost_feedback: CostFeedback,
               rng: Optional[RunStreams] = None) -> RoundRecord:
    return _play(state, Exp4Learner, x_t, env_cost_feedback, rng)


def epsilon_greedy_round(state: EpsilonGreedyLearner, x_t: Context, env_cost_feedback: CostFeedback,
                         rng: Optional[RunStreams] = None) -> RoundRecord:
    return _play(state, EpsilonGreedyLearner, x_t, env_cost_feedback, rng)


def build_learner(spec: LearnerSpec, policy_class: PolicyClass, T: int, streams: RunStreams,
                  context_dist=None, oracle: Optional[ErmOracle] = None) -> Learner:
    """Instantiate the learner a spec describes."""
    params = spec.resolved_params()
    if spec.kind == LearnerKind.RELAX.value:
        return RelaxBanditLearner(policy_class, T, streams, context_dist, gamma=params['gamma'], oracle=oracle)
    if spec.kind == LearnerKind.FULL_RADEMACHER.value:
        return FullRademacherLearner(policy_class, T, streams, context_dist, gamma=params['gamma'], oracle=oracle)
    if spec.kind == LearnerKind.EXP4.value:
        return Exp4Learner(policy_class, T, streams, gamma=params['gamma'],
                           learning_rate=params['learning_rate'], oracle=oracle)
    return EpsilonGreedyLearner(policy_class, T, streams, epsilon=params['epsilon'],
                                warm_start=params['warm_start'], oracle=oracle)
