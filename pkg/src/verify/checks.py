"""
Numerical certificates for the relaxation learner.

Every check returns a CheckReport with a one-sided comparison and an
explicit SIGMA_MARGIN standard-error margin. Small instances are evaluated
by exact enumeration and report zero standard error.
"""
import itertools
import logging
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import (EXACT_ATOM_LIMIT, ORACLE_TOLERANCE, RELAXATION_LEARNERS, SIGMA_MARGIN,
                           TINY_LIMITS, BUILTIN_ADVERSARIES)
from ..core.episode import run_episode
from ..core.errors import ConfigurationError, InputError, OracleBudgetError
from ..core.estimator import check_exploration_floor
from ..core.learners import LearnerSpec, build_learner, default_gamma
from ..core.oracle import ErmOracle, ErmQuery, ExhaustiveErmOracle, PastEntry, best_fixed_policy_cost
from ..core.relaxation import relaxation_random_value, sample_rollout
from ..core.rng import RunStreams
from ..core.strategy import compute_strategy
from ..core.types import (ActionDistribution, Context, CostVector, EstimatedCost, PolicyClass, RoundRecord,
                          Rollout)
from ..envs.adversaries import AdversarySpec
from ..envs.contexts import ContextDistribution, sample_context
from ..envs.environment import EnvironmentSpec
from .enumeration import enumerate_rollouts, exact_rel, rollout_atom_count
from .report import CheckReport
from .stats import RunningStats, parallel_monte_carlo

logger = logging.getLogger(__name__)

# strategy(history, rollout, x_t, gamma, K, oracle) -> q_t
Strategy = Callable[[Sequence[PastEntry], Rollout, Context, float, int, ErmOracle], ActionDistribution]


def _shipped_strategy(history, rollout, x_t, gamma, K, oracle) -> ActionDistribution:
    return compute_strategy(history, rollout, x_t, gamma, K, oracle)[0]


def rademacher_bound(T: int, K: int, pi_size: int, gamma: float) -> float:
    """2 sqrt(K T ln|Pi| / gamma)."""
    return 2.0 * math.sqrt(K * T * math.log(pi_size) / gamma)


def regret_bound(T: int, K: int, pi_size: int, gamma: float) -> float:
    """4 sqrt(T K ln|Pi| / gamma) + gamma T."""
    return 4.0 * math.sqrt(T * K * math.log(pi_size) / gamma) + gamma * T


def gamma_admissible_range(T: int, K: int, pi_size: int) -> Tuple[float, float]:
    """Open lower and closed upper end of the gamma range the regret bound needs."""
    return K * math.log(pi_size) / (2.0 * T), 1.0


@dataclass(frozen=True, eq=False)
class Instance:
    """Policy class, context distribution and horizon a check runs on."""
    policy_class: PolicyClass
    context_dist: ContextDistribution
    T: int
    gamma: Optional[float] = None
    dense: bool = False

    def __post_init__(self):
        if self.T < 1:
            raise ConfigurationError(f"horizon must be at least 1, got T={self.T}")
        if self.context_dist.X != self.policy_class.X:
            raise ConfigurationError(
                f"context distribution has X={self.context_dist.X}, policy class has X={self.policy_class.X}")
        if self.gamma is not None and not 0.0 < self.gamma <= 1.0:
            raise ConfigurationError(f"gamma must lie in (0, 1], got {self.gamma!r}")

    @property
    def K(self) -> int:
        return self.policy_class.K

    @property
    def X(self) -> int:
        return self.policy_class.X

    @property
    def pi_size(self) -> int:
        return self.policy_class.size

    @property
    def resolved_gamma(self) -> float:
        return self.gamma if self.gamma is not None else default_gamma(self.T, self.K, self.pi_size)

    def require_tiny(self):
        """Refuse instances too large for the combinatorial checks."""
        sizes = {'K': self.K, 'T': self.T, 'policies': self.pi_size, 'X': self.X}
        over = [f"{k}={v} > {TINY_LIMITS[k]}" for k, v in sizes.items() if v > TINY_LIMITS[k]]
        if over:
            raise ConfigurationError(f"instance too large for exhaustive checking: {', '.join(over)}")

    def learner_spec(self) -> LearnerSpec:
        kind = 'full_rademacher' if self.dense else 'relax'
        return LearnerSpec(kind, kind, {'gamma': self.resolved_gamma})

    def environment(self, adversary: AdversarySpec) -> EnvironmentSpec:
        return EnvironmentSpec(self.context_dist, adversary, self.policy_class)


def estimate_rel(history: Sequence[PastEntry], t: int, T: int, gamma: float, K: int,
                 policy_class: PolicyClass, oracle: Optional[ErmOracle], n_samples: int,
                 rng: np.random.Generator, context_dist: ContextDistribution,
                 dense: bool = False, jobs: int = 1) -> Tuple[float, float]:
    """Monte-Carlo mean and standard error of R over independent rollouts.

    With t = T there is nothing to sample and the deterministic value is
    returned with zero standard error. A caller-supplied oracle is only used
    for serial evaluation; parallel batches each build their own.
    """
    if n_samples < 1:
        raise InputError(f"need at least one sample, got {n_samples}")
    if t == T:
        oracle = oracle or ExhaustiveErmOracle(policy_class)
        return relaxation_random_value(history, Rollout.empty(K, K / gamma, dense), t, T, gamma, oracle), 0.0

    def sampler(child: np.random.Generator, n: int) -> np.ndarray:
        batch_oracle = oracle if oracle is not None and jobs == 1 else ExhaustiveErmOracle(policy_class)
        out = np.empty(n)
        for i in range(n):
            rollout = sample_rollout(t, T, K, gamma, context_dist, child, dense=dense)
            out[i] = relaxation_random_value(history, rollout, t, T, gamma, batch_oracle)
        return out

    stats = parallel_monte_carlo(sampler, n_samples, rng, jobs=jobs)
    return stats.mean, stats.std_error


def random_history(instance: Instance, length: int, rng: np.random.Generator) -> List[PastEntry]:
    """Arbitrary admissible-looking history: each round is a spike on a random arm or zero."""
    gamma = instance.resolved_gamma
    history = []
    for _ in range(length):
        x = sample_context(instance.context_dist, rng)
        if rng.random() < 0.5:
            history.append((x, EstimatedCost.spike(int(rng.integers(instance.K)), instance.K, gamma)))
        else:
            history.append((x, EstimatedCost.ZERO))
    return history


@dataclass
class RoundTerms:
    """Ingredients of E[c(y_t) + Rel(I_{1:t})] at one context, for any cost vector.

    Given q_t, the expectation over y_t and the estimator coin is
    <q, c> + (gamma/K) sum_y c(y) Rel_spike(y) + (1 - gamma sum_y c(y) / K) Rel_zero,
    so only the average of q_t over rollouts and the K + 1 possible values
    of Rel(I_{1:t}) are needed.
    """
    weights: np.ndarray
    qs: np.ndarray
    rel_zero: float
    rel_zero_se: float
    rel_spike: np.ndarray
    rel_spike_se: np.ndarray
    gamma: float
    exact: bool

    @property
    def K(self) -> int:
        return int(self.qs.shape[1])

    def value(self, c) -> Tuple[float, float]:
        c = np.asarray(c, dtype=float)
        inner = self.qs @ c
        mean_q = float(np.dot(self.weights, inner))
        var_q = 0.0 if self.exact or inner.size < 2 else float(inner.var(ddof=1) / inner.size)
        w_zero = 1.0 - self.gamma * c.sum() / self.K
        w_spike = self.gamma * c / self.K
        mean = mean_q + w_zero * self.rel_zero + float(np.dot(w_spike, self.rel_spike))
        var = var_q + (w_zero * self.rel_zero_se) ** 2 + float(((w_spike * self.rel_spike_se) ** 2).sum())
        return mean, math.sqrt(var)


def round_terms(instance: Instance, history: Sequence[PastEntry], t: int, x_t: Context, exact: bool,
                n_inner: int, rng: np.random.Generator, strategy: Optional[Strategy] = None,
                jobs: int = 1) -> RoundTerms:
    """Collect q_t over rollouts and Rel(I_{1:t}) for every estimate at x_t.

    Raises:
        ContractError: the strategy violates the gamma/K exploration floor.
    """
    strategy = strategy or _shipped_strategy
    gamma, K, T = instance.resolved_gamma, instance.K, instance.T
    pc, dist, dense = instance.policy_class, instance.context_dist, instance.dense
    history = list(history)
    oracle = ExhaustiveErmOracle(pc)

    weights, qs = [], []
    if exact:
        rollouts: Iterable[Tuple[float, Rollout]] = enumerate_rollouts(T - t, K, gamma, dist, dense)
    else:
        rollouts = ((1.0 / n_inner, sample_rollout(t, T, K, gamma, dist, rng, dense=dense)) for _ in range(n_inner))
    for p, rollout in rollouts:
        q = strategy(history, rollout, x_t, gamma, K, oracle)
        check_exploration_floor(q, gamma, K)
        weights.append(p)
        qs.append(q.probs)

    estimates = [EstimatedCost.ZERO] + [EstimatedCost.spike(a, K, gamma) for a in range(K)]
    rels, ses = [], []
    for estimate in estimates:
        after = history + [(x_t, estimate)]
        if exact:
            rels.append(exact_rel(after, t, T, gamma, K, pc, dist, dense))
            ses.append(0.0)
        else:
            mean, se = estimate_rel(after, t, T, gamma, K, pc, None, n_inner, rng, dist, dense, jobs)
            rels.append(mean)
            ses.append(se)
    return RoundTerms(np.array(weights), np.array(qs), rels[0], ses[0],
                      np.array(rels[1:]), np.array(ses[1:]), gamma, exact)


def _exact_admissibility(instance: Instance, t: int) -> bool:
    atoms = rollout_atom_count(instance.T - t + 1, instance.K, instance.X, instance.dense)
    return instance.X * (instance.K + 2) * atoms <= EXACT_ATOM_LIMIT


def check_admissibility_step(instance: Instance, t: int, n_outer: int, n_inner: int, rng: np.random.Generator,
                             history: Optional[Sequence[PastEntry]] = None, strategy: Optional[Strategy] = None,
                             jobs: int = 1) -> CheckReport:
    """E_x sup_c E[c(y_t) + Rel(I_{1:t})] <= Rel(I_{1:t-1}) at round t.

    The sup over c runs over the 2^K vertices of [0, 1]^K, where an affine
    objective attains its maximum. The strategy is the shipped one unless
    another is given; the inf over q is not searched.
    """
    instance.require_tiny()
    T, K = instance.T, instance.K
    if not 1 <= t <= T:
        raise InputError(f"round {t} outside [1, {T}]")
    gamma = instance.resolved_gamma
    if history is None:
        history = random_history(instance, t - 1, rng)
    history = list(history)
    if len(history) != t - 1:
        raise InputError(f"history has {len(history)} rounds, expected t - 1 = {t - 1}")
    exact = _exact_admissibility(instance, t)

    lhs, lhs_var = 0.0, 0.0
    for x_id, p_x in enumerate(instance.context_dist.probs):
        if p_x == 0.0:
            continue
        terms = round_terms(instance, history, t, Context(x_id, instance.X), exact, n_inner, rng, strategy, jobs)
        best = max((terms.value(c) for c in itertools.product((0.0, 1.0), repeat=K)), key=lambda v: v[0])
        lhs += p_x * best[0]
        lhs_var += (p_x * best[1]) ** 2

    if exact:
        rhs, rhs_se = exact_rel(history, t - 1, T, gamma, K, instance.policy_class,
                                instance.context_dist, instance.dense), 0.0
        n = rollout_atom_count(T - t + 1, K, instance.X, instance.dense)
    else:
        rhs, rhs_se = estimate_rel(history, t - 1, T, gamma, K, instance.policy_class, None, n_outer, rng,
                                   instance.context_dist, instance.dense, jobs)
        n = n_inner
    se = math.sqrt(lhs_var + rhs_se ** 2)
    passed = lhs <= rhs + SIGMA_MARGIN * se + ORACLE_TOLERANCE
    logger.info("admissibility t=%d: lhs %.6f rhs %.6f se %.3g -> %s", t, lhs, rhs, se, "pass" if passed else "FAIL")
    return CheckReport('admissibility_step', lhs, rhs, se, n, passed, '<=', exact,
                       {'t': t, 'gamma': gamma, 'n_outer': n_outer, 'n_inner': n_inner,
                        'tolerance': ORACLE_TOLERANCE})


def _final_exact_work(instance: Instance) -> int:
    K, X, T = instance.K, instance.X, instance.T
    return sum((K + 1) ** (t - 1) * rollout_atom_count(T - t, K, X, instance.dense) for t in range(1, T + 1))


def final_value_exact(instance: Instance, contexts: Sequence[Context], costs: Sequence[CostVector],
                      strategy: Optional[Strategy] = None) -> float:
    """E[Rel(I_{1:T})] over rollouts, actions and coins when the learner faces fixed (x, c)."""
    strategy = strategy or _shipped_strategy
    gamma, K, T = instance.resolved_gamma, instance.K, instance.T
    pc = instance.policy_class
    oracle = ExhaustiveErmOracle(pc, use_cache=False)
    estimates = [EstimatedCost.ZERO] + [EstimatedCost.spike(a, K, gamma) for a in range(K)]

    def value(t: int, history: List[PastEntry]) -> float:
        if t > T:
            return -oracle.value_of_erm(ErmQuery(past=history)).value
        x_t, c_t = contexts[t - 1], costs[t - 1]
        for _, rollout in enumerate_rollouts(T - t, K, gamma, instance.context_dist, instance.dense):
            check_exploration_floor(strategy(history, rollout, x_t, gamma, K, oracle), gamma, K)
        after = [value(t + 1, history + [(x_t, e)]) for e in estimates]
        # P(spike on y) = q(y) * gamma c(y) / (K q(y)), independent of q once the floor holds
        spike_mass = gamma * c_t.costs / K
        return float((1.0 - spike_mass.sum()) * after[0] + np.dot(spike_mass, after[1:]))

    return value(1, [])


def check_final_condition(instance: Instance, n_samples: int, rng: np.random.Generator,
                          contexts: Optional[Sequence[Context]] = None,
                          costs: Optional[Sequence[CostVector]] = None, jobs: int = 1) -> CheckReport:
    """E[Rel(I_{1:T})] >= -min_pi sum_t c_t(pi(x_t)) for a fixed context and cost sequence."""
    instance.require_tiny()
    T, K = instance.T, instance.K
    if contexts is None:
        contexts = [sample_context(instance.context_dist, rng) for _ in range(T)]
    if costs is None:
        costs = [CostVector(rng.random(K)) for _ in range(T)]
    if len(contexts) != T or len(costs) != T:
        raise InputError(f"need {T} contexts and cost vectors, got {len(contexts)} and {len(costs)}")
    rhs = -best_fixed_policy_cost(contexts, costs, instance.policy_class)[0]

    exact = _final_exact_work(instance) <= EXACT_ATOM_LIMIT
    if exact:
        lhs, se, n = final_value_exact(instance, contexts, costs), 0.0, _final_exact_work(instance)
    else:
        spec, pc, dist = instance.learner_spec(), instance.policy_class, instance.context_dist

        def sampler(child: np.random.Generator, n_runs: int) -> np.ndarray:
            out = np.empty(n_runs)
            final = ExhaustiveErmOracle(pc, use_cache=False)
            for i in range(n_runs):
                streams = RunStreams(*child.spawn(5))
                learner = build_learner(spec, pc, T, streams, context_dist=dist)
                for x_t, c_t in zip(contexts, costs):
                    learner.play_round(x_t, lambda q, c=c_t: c)
                out[i] = -final.value_of_erm(ErmQuery(past=learner.history)).value
            return out

        stats = parallel_monte_carlo(sampler, n_samples, rng, jobs=jobs)
        lhs, se, n = stats.mean, stats.std_error, stats.n
    passed = lhs + SIGMA_MARGIN * se + ORACLE_TOLERANCE >= rhs
    logger.info("final condition: lhs %.6f rhs %.6f se %.3g -> %s", lhs, rhs, se, "pass" if passed else "FAIL")
    return CheckReport('final_condition', lhs, rhs, se, n, passed, '>=', exact,
                       {'gamma': instance.resolved_gamma, 'T': T, 'tolerance': ORACLE_TOLERANCE})


def check_rademacher_bound(T: int, K: int, policy_class: PolicyClass, gamma: float, n_samples: int,
                           rng: np.random.Generator, context_dist: Optional[ContextDistribution] = None,
                           jobs: int = 1) -> CheckReport:
    """E sup_pi sum_t Z_t eps_t(pi(x_t)) <= 2 sqrt(K T ln|Pi| / gamma).

    Raises:
        ConfigurationError: gamma <= K ln|Pi| / (2T), outside the bound's hypothesis.
    """
    if policy_class.K != K:
        raise ConfigurationError(f"policy class has K={policy_class.K}, check asked for K={K}")
    low, high = gamma_admissible_range(T, K, policy_class.size)
    if not low < gamma <= high:
        raise ConfigurationError(
            f"Rademacher bound needs gamma > K ln|Pi| / (2T) = {low:.6g} and gamma <= 1, got gamma={gamma!r}")
    dist = context_dist or ContextDistribution.uniform(policy_class.X)
    tables = policy_class.tables
    scale = K / gamma

    def sampler(child: np.random.Generator, n: int) -> np.ndarray:
        xs = dist.sample(child, (n, T))
        arms = child.integers(0, K, size=(n, T))
        signs = 2 * child.integers(0, 2, size=(n, T)) - 1
        z = np.where(child.random((n, T)) < gamma, scale, 0.0)
        hits = tables[:, xs] == arms[None, :, :]
        return (hits * (signs * z)[None, :, :]).sum(axis=2).max(axis=0)

    stats = parallel_monte_carlo(sampler, n_samples, rng, jobs=jobs)
    bound = rademacher_bound(T, K, policy_class.size, gamma) if policy_class.size > 1 else 0.0
    passed = stats.mean - SIGMA_MARGIN * stats.std_error <= bound
    logger.info("Rademacher K=%d T=%d gamma=%.3g: mean %.4f se %.3g bound %.4f -> %s",
                K, T, gamma, stats.mean, stats.std_error, bound, "pass" if passed else "FAIL")
    return CheckReport('rademacher_bound', stats.mean, bound, stats.std_error, stats.n, passed, '<=', False,
                       {'T': T, 'K': K, 'gamma': gamma, 'policies': policy_class.size})


def _episode_regret(args) -> float:
    spec, env_spec, T, seed, master_seed = args
    return run_episode(spec, env_spec, T, seed, master_seed)[1].expected_regret


def _adversary_regrets(instance: Instance, spec: LearnerSpec, adversaries: Sequence[AdversarySpec],
                       n_seeds: int, master_seed: int, jobs: int) -> Dict[str, RunningStats]:
    tasks = [(spec, instance.environment(adv), instance.T, seed, master_seed)
             for adv in adversaries for seed in range(n_seeds)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            regrets = list(executor.map(_episode_regret, tasks))
    else:
        regrets = [_episode_regret(task) for task in tasks]
    out = {}
    for i, adv in enumerate(adversaries):
        out[adv.name] = RunningStats().extend(regrets[i * n_seeds:(i + 1) * n_seeds])
    return out


def _builtin_adversaries() -> List[AdversarySpec]:
    return [AdversarySpec.adaptive(rule) for rule in BUILTIN_ADVERSARIES]


def check_regret_bound(instance: Instance, gamma: float, n_seeds: int, master_seed: int = 0,
                       adversaries: Optional[Sequence[AdversarySpec]] = None, jobs: int = 1) -> CheckReport:
    """Mean expected regret minus the margin stays below 4 sqrt(TK ln|Pi|/gamma) + gamma T.

    Raises:
        ConfigurationError: gamma outside (K ln|Pi| / (2T), 1].
    """
    T, K, pi_size = instance.T, instance.K, instance.pi_size
    low, high = gamma_admissible_range(T, K, pi_size)
    if not low < gamma <= high:
        raise ConfigurationError(f"regret bound needs K ln|Pi| / (2T) = {low:.6g} < gamma <= 1, got {gamma!r}")
    if n_seeds < 1:
        raise InputError(f"need at least one seed, got {n_seeds}")
    adversaries = list(adversaries) if adversaries else _builtin_adversaries()
    spec = LearnerSpec('relax', 'full_rademacher' if instance.dense else 'relax', {'gamma': gamma})
    bound = regret_bound(T, K, pi_size, gamma)
    per_adversary = _adversary_regrets(instance, spec, adversaries, n_seeds, master_seed, jobs)

    details, worst = {}, None
    for name, stats in per_adversary.items():
        ok = stats.mean - SIGMA_MARGIN * stats.std_error <= bound
        details[name] = {'mean': stats.mean, 'se': stats.std_error, 'n': stats.n, 'pass': ok}
        if worst is None or stats.mean > worst.mean:
            worst = stats
        logger.info("regret bound vs %s: mean %.3f se %.3f bound %.3f -> %s",
                    name, stats.mean, stats.std_error, bound, "pass" if ok else "FAIL")
    passed = all(d['pass'] for d in details.values())
    return CheckReport('regret_bound', worst.mean, bound, worst.std_error, worst.n, passed, '<=', False,
                       {'T': T, 'K': K, 'gamma': gamma, 'policies': pi_size, 'adversaries': details})


def check_relaxation_certificate(instance: Instance, n_seeds: int, n_samples: int, rng: np.random.Generator,
                                 master_seed: int = 0, adversaries: Optional[Sequence[AdversarySpec]] = None,
                                 jobs: int = 1) -> CheckReport:
    """Mean expected regret against each adversary is at most Rel of the empty history."""
    T, K, gamma = instance.T, instance.K, instance.resolved_gamma
    pc, dist = instance.policy_class, instance.context_dist
    if rollout_atom_count(T, K, instance.X, instance.dense) <= EXACT_ATOM_LIMIT:
        rel, rel_se, exact = exact_rel([], 0, T, gamma, K, pc, dist, instance.dense), 0.0, True
    else:
        rel, rel_se = estimate_rel([], 0, T, gamma, K, pc, None, n_samples, rng, dist, instance.dense, jobs)
        exact = False
    adversaries = list(adversaries) if adversaries else _builtin_adversaries()
    per_adversary = _adversary_regrets(instance, instance.learner_spec(), adversaries, n_seeds, master_seed, jobs)

    details, worst = {}, None
    for name, stats in per_adversary.items():
        ok = stats.mean - SIGMA_MARGIN * stats.std_error <= rel + SIGMA_MARGIN * rel_se
        details[name] = {'mean': stats.mean, 'se': stats.std_error, 'n': stats.n, 'pass': ok}
        if worst is None or stats.mean > worst.mean:
            worst = stats
    passed = all(d['pass'] for d in details.values())
    logger.info("relaxation certificate: Rel(empty) %.3f, worst mean regret %.3f -> %s",
                rel, worst.mean, "pass" if passed else "FAIL")
    return CheckReport('relaxation_certificate', worst.mean, rel, math.hypot(worst.std_error, rel_se),
                       worst.n, passed, '<=', exact,
                       {'gamma': gamma, 'rel_se': rel_se, 'adversaries': details})


def oracle_budget(kind: str, K: int) -> Tuple[int, bool]:
    """(budget, exact) for a learner kind: exact budgets must be met, others are maxima."""
    if kind in RELAXATION_LEARNERS:
        return K + 1, True
    if kind == 'epsilon_greedy':
        return 1, False
    if kind == 'exp4':
        return 0, True
    raise ConfigurationError(f"unknown learner kind {kind!r}")


def assert_oracle_budget(trace: Sequence[RoundRecord], K: int, kind: str):
    """Raise OracleBudgetError naming the first round that broke the learner's budget."""
    budget, exact = oracle_budget(kind, K)
    for record in trace:
        if (record.oracle_calls != budget) if exact else (record.oracle_calls > budget):
            raise OracleBudgetError(record.t, record.oracle_calls, budget)


def count_oracle_calls(trace: Sequence[RoundRecord], K: Optional[int] = None,
                       kind: Optional[str] = None) -> np.ndarray:
    """Per-round oracle call counts; checked against the budget when `kind` is given."""
    counts = np.array([r.oracle_calls for r in trace], dtype=np.int64)
    if kind is not None:
        if K is None:
            raise InputError("checking an oracle budget needs K")
        assert_oracle_budget(trace, K, kind)
    return counts


def oracle_call_histogram(traces: Iterable[Tuple[str, Sequence[RoundRecord]]]) -> Dict[str, Dict[int, int]]:
    """{learner: {calls per round: number of rounds}} over a mixed batch of traces."""
    counters: Dict[str, Counter] = {}
    for learner, trace in traces:
        counters.setdefault(learner, Counter()).update(r.oracle_calls for r in trace)
    return {name: dict(sorted(counter.items())) for name, counter in counters.items()}
