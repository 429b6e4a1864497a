"""
Cost-generating adversaries.

An adversary commits c_t after seeing the context x_t and the learner's
distribution q_t, but before y_t is sampled; nothing in this module ever
receives the sampled action.
"""
from __future__ import annotations

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd

from ..core.config import FLOOR_TOLERANCE
from ..core.errors import ConfigurationError, ContractError, InputError, ValidationError
from ..core.types import ActionDistribution, Context, CostVector, PolicyClass

logger = logging.getLogger(__name__)

# (x_t, c_t, q_t) for every committed round
AdversaryHistory = List[Tuple[Context, CostVector, ActionDistribution]]


class AdversaryKind(Enum):
    FIXED_SEQUENCE = "fixed_sequence"
    STOCHASTIC = "stochastic"
    ADAPTIVE = "adaptive"


NOISE_LAWS = ('bernoulli', 'none')


@dataclass(frozen=True, eq=False)
class AdversarySpec:
    """Declarative description of an adversary.

    Attributes:
        kind: which family the adversary belongs to.
        name: label used in traces and reports.
        costs: (T, K) cost table for FIXED_SEQUENCE.
        means: (X, K) per-context mean costs for STOCHASTIC.
        noise: 'bernoulli' draws each entry as Bernoulli(mean); 'none' returns the mean.
        rule: name of a built-in adaptive rule for ADAPTIVE.
    """
    kind: AdversaryKind
    name: str
    costs: Optional[np.ndarray] = None
    means: Optional[np.ndarray] = None
    noise: str = 'bernoulli'
    rule: Optional[str] = None

    def __post_init__(self):
        if self.kind is AdversaryKind.FIXED_SEQUENCE:
            table = np.array(self.costs, dtype=float)
            if table.ndim != 2:
                raise ValidationError("a fixed sequence needs a (T, K) cost table")
            _check_unit_interval(table, "fixed-sequence cost")
            table.setflags(write=False)
            object.__setattr__(self, 'costs', table)
        elif self.kind is AdversaryKind.STOCHASTIC:
            means = np.array(self.means, dtype=float)
            if means.ndim != 2:
                raise ValidationError("a stochastic adversary needs an (X, K) mean table")
            _check_unit_interval(means, "mean cost")
            if self.noise not in NOISE_LAWS:
                raise ValidationError(f"unknown noise law {self.noise!r}; expected one of {NOISE_LAWS}")
            means.setflags(write=False)
            object.__setattr__(self, 'means', means)
        elif self.rule not in ADAPTIVE_RULES:
            raise ValidationError(f"unknown adaptive rule {self.rule!r}; expected one of {sorted(ADAPTIVE_RULES)}")

    @classmethod
    def fixed_sequence(cls, costs, name: str = 'fixed_sequence') -> 'AdversarySpec':
        return cls(AdversaryKind.FIXED_SEQUENCE, name, costs=costs)

    @classmethod
    def stochastic(cls, means, noise: str = 'bernoulli', name: str = 'stochastic') -> 'AdversarySpec':
        return cls(AdversaryKind.STOCHASTIC, name, means=means, noise=noise)

    @classmethod
    def adaptive(cls, rule: str, name: Optional[str] = None) -> 'AdversarySpec':
        return cls(AdversaryKind.ADAPTIVE, name or rule, rule=rule)

    def check_dimensions(self, T: int, K: int, X: int):
        """Raise ConfigurationError if the stored tables disagree with (T, K, X)."""
        if self.kind is AdversaryKind.FIXED_SEQUENCE:
            if self.costs.shape[1] != K:
                raise ConfigurationError(f"adversary {self.name!r} has {self.costs.shape[1]} actions, expected K={K}")
            if self.costs.shape[0] < T:
                raise ConfigurationError(f"adversary {self.name!r} stores {self.costs.shape[0]} rounds, horizon is {T}")
        elif self.kind is AdversaryKind.STOCHASTIC and self.means.shape != (X, K):
            raise ConfigurationError(f"adversary {self.name!r} means have shape {self.means.shape}, expected ({X}, {K})")


def _check_unit_interval(values: np.ndarray, label: str):
    if not np.all(np.isfinite(values)) or values.min() < 0.0 or values.max() > 1.0:
        raise ValidationError(f"every {label} must lie in [0, 1]")


class AdaptiveRule(ABC):
    """Adaptive cost rule operating on (history, x_t, q_t)."""

    def __init__(self, policy_class: PolicyClass):
        self.policy_class = policy_class

    @abstractmethod
    def cost(self, t: int, history: AdversaryHistory, x_t: Context, q_t: ActionDistribution) -> np.ndarray:
        """Cost vector for round t."""

    def observe(self, x_t: Context, costs: CostVector):
        """Called once the round's costs are committed."""


class PunishTheMode(AdaptiveRule):
    """Cost 1 on the most likely action (lowest index on ties), 0 elsewhere."""

    def cost(self, t, history, x_t, q_t):
        c = np.zeros(q_t.K)
        c[int(np.argmax(q_t.probs))] = 1.0
        return c


class PunishAboveUniform(AdaptiveRule):
    """Cost 1 on every action played with probability above 1/K."""

    def cost(self, t, history, x_t, q_t):
        return (q_t.probs > 1.0 / q_t.K + FLOOR_TOLERANCE).astype(float)


class BestPolicyChaser(AdaptiveRule):
    """Cost 1 on the action the best policy so far would play at x_t."""

    def __init__(self, policy_class: PolicyClass):
        super().__init__(policy_class)
        self._totals = np.zeros(policy_class.size)

    def cost(self, t, history, x_t, q_t):
        leader = int(np.argmin(self._totals))
        c = np.zeros(q_t.K)
        c[self.policy_class.tables[leader, x_t.id]] = 1.0
        return c

    def observe(self, x_t, costs):
        self._totals += costs.costs[self.policy_class.actions_at(x_t.id)]


ADAPTIVE_RULES = {
    'punish_the_mode': PunishTheMode,
    'punish_above_uniform': PunishAboveUniform,
    'best_policy_chaser': BestPolicyChaser,
}


def make_rule(spec: AdversarySpec, policy_class: PolicyClass) -> Optional[AdaptiveRule]:
    if spec.kind is not AdversaryKind.ADAPTIVE:
        return None
    return ADAPTIVE_RULES[spec.rule](policy_class)


def adversary_cost(spec: AdversarySpec, t: int, history: AdversaryHistory, x_t: Context,
                   q_t: ActionDistribution, rng: Optional[np.random.Generator] = None,
                   rule: Optional[AdaptiveRule] = None) -> CostVector:
    """Commit c_t for round t (1-indexed).

    Raises:
        InputError: t is past the end of a fixed sequence.
        ContractError: an adaptive rule produced a cost outside [0, 1]^K.
    """
    if spec.kind is AdversaryKind.FIXED_SEQUENCE:
        if not 1 <= t <= spec.costs.shape[0]:
            raise InputError(f"round {t} outside the stored sequence of {spec.costs.shape[0]} rounds")
        return CostVector(spec.costs[t - 1])
    if spec.kind is AdversaryKind.STOCHASTIC:
        means = spec.means[x_t.id]
        if spec.noise == 'none':
            return CostVector(means)
        return CostVector((rng.random(means.size) < means).astype(float))
    if rule is None:
        raise ContractError(f"adaptive adversary {spec.name!r} needs a rule instance")
    raw = np.asarray(rule.cost(t, history, x_t, q_t), dtype=float)
    if raw.shape != (q_t.K,) or not np.all(np.isfinite(raw)) or raw.min() < 0.0 or raw.max() > 1.0:
        raise ContractError(f"rule {spec.rule!r} emitted an invalid cost vector {raw.tolist()} at round {t}")
    return CostVector(raw)


def load_cost_sequence(path, K: int, name: Optional[str] = None) -> AdversarySpec:
    """Read a headerless CSV of T rows and K columns into a fixed-sequence adversary."""
    path = Path(path)
    try:
        frame = pd.read_csv(path, header=None, dtype=float)
    except (OSError, ValueError) as e:
        raise ConfigurationError(f"cannot read cost sequence {path}: {e}") from e
    table = frame.to_numpy()
    if table.shape[1] != K:
        raise ValidationError(f"{path} has {table.shape[1]} columns, expected K={K}")
    for row, values in enumerate(table, start=1):
        if not np.all(np.isfinite(values)) or values.min() < 0.0 or values.max() > 1.0:
            raise ValidationError(f"{path} row {row} has a cost outside [0, 1]")
    logger.info("Loaded %d-round cost sequence from %s", table.shape[0], path)
    return AdversarySpec.fixed_sequence(table, name=name or path.stem)
