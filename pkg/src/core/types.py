"""
Domain types shared by every module: contexts, costs, policies,
action distributions, cost estimates and hallucinated rollouts.

Actions, contexts and policies are 0-indexed throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .config import PROB_TOLERANCE
from .errors import InputError, ValidationError


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


def _is_index(value) -> bool:
    return isinstance(value, (int, np.integer)) and not isinstance(value, bool)


@dataclass(frozen=True)
class Context:
    """A context drawn from a finite universe of size X."""
    id: int
    universe: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        if not _is_index(self.id) or self.id < 0:
            raise ValidationError(f"context id must be a non-negative integer, got {self.id!r}")
        if self.universe is not None and self.id >= self.universe:
            raise ValidationError(f"context id {self.id} outside universe of size {self.universe}")
        object.__setattr__(self, 'id', int(self.id))


@dataclass(frozen=True, eq=False)
class CostVector:
    """True cost vector c_t with entries in [0, 1]."""
    costs: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.costs, float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValidationError(f"cost vector must be a non-empty 1-d vector, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)) or arr.min() < 0.0 or arr.max() > 1.0:
            raise ValidationError(f"cost entries must lie in [0, 1], got {arr.tolist()}")
        object.__setattr__(self, 'costs', arr)

    @property
    def K(self) -> int:
        return int(self.costs.size)

    def __getitem__(self, action: int) -> float:
        return float(self.costs[action])

    def __eq__(self, other):
        return isinstance(other, CostVector) and np.array_equal(self.costs, other.costs)

    def to_array(self, K: int) -> np.ndarray:
        if K != self.K:
            raise ValidationError(f"cost vector has length {self.K}, expected {K}")
        return self.costs


@dataclass(frozen=True, eq=False)
class Policy:
    """Lookup table mapping each context id to an action."""
    table: np.ndarray
    n_actions: int

    def __post_init__(self):
        arr = _frozen_array(self.table, np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise ValidationError("policy table must be a non-empty 1-d vector")
        if self.n_actions < 1:
            raise ValidationError(f"policy needs at least one action, got K={self.n_actions}")
        if arr.min() < 0 or arr.max() >= self.n_actions:
            raise ValidationError(f"policy actions must lie in [0, {self.n_actions}), got {arr.tolist()}")
        object.__setattr__(self, 'table', arr)

    @property
    def X(self) -> int:
        return int(self.table.size)

    def __eq__(self, other):
        return (isinstance(other, Policy) and self.n_actions == other.n_actions
                and np.array_equal(self.table, other.table))

    def __hash__(self):
        return hash((self.n_actions, self.table.tobytes()))


@dataclass(frozen=True, eq=False)
class PolicyClass:
    """Finite indexed set of lookup-table policies sharing X and K.

    The tables are stored as one (|Pi|, X) integer matrix so the oracle can
    evaluate every policy at once.
    """
    tables: np.ndarray
    n_actions: int

    def __post_init__(self):
        arr = _frozen_array(self.tables, np.int64)
        if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
            raise ValidationError(f"policy class must be a non-empty (|Pi|, X) table, got shape {arr.shape}")
        if self.n_actions < 1:
            raise ValidationError(f"policy class needs at least one action, got K={self.n_actions}")
        if arr.min() < 0 or arr.max() >= self.n_actions:
            raise ValidationError(f"policy actions must lie in [0, {self.n_actions})")
        object.__setattr__(self, 'tables', arr)

    @classmethod
    def from_policies(cls, policies: Sequence[Policy]) -> 'PolicyClass':
        if not policies:
            raise ValidationError("policy class must contain at least one policy")
        X, K = policies[0].X, policies[0].n_actions
        for p in policies:
            if p.X != X or p.n_actions != K:
                raise ValidationError("all policies must share the same X and K")
        return cls(np.stack([p.table for p in policies]), K)

    @property
    def size(self) -> int:
        return int(self.tables.shape[0])

    @property
    def X(self) -> int:
        return int(self.tables.shape[1])

    @property
    def K(self) -> int:
        return self.n_actions

    def __len__(self) -> int:
        return self.size

    def __getitem__(self, index: int) -> Policy:
        return Policy(self.tables[index], self.n_actions)

    def actions_at(self, context_id: int) -> np.ndarray:
        """Action chosen by every policy at one context, shape (|Pi|,)."""
        return self.tables[:, context_id]


@dataclass(frozen=True, eq=False)
class ActionDistribution:
    """Probability vector q over the K actions."""
    probs: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.probs, float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValidationError("action distribution must be a non-empty 1-d vector")
        if not np.all(np.isfinite(arr)) or arr.min() < 0.0:
            raise ValidationError(f"probabilities must be non-negative, got {arr.tolist()}")
        if abs(arr.sum() - 1.0) > PROB_TOLERANCE:
            raise ValidationError(f"probabilities must sum to 1, got {arr.sum()!r}")
        object.__setattr__(self, 'probs', arr)

    @property
    def K(self) -> int:
        return int(self.probs.size)

    @property
    def floor(self) -> float:
        return float(self.probs.min())

    def __getitem__(self, action: int) -> float:
        return float(self.probs[action])

    def __eq__(self, other):
        return isinstance(other, ActionDistribution) and np.array_equal(self.probs, other.probs)

    def expected_cost(self, costs: CostVector) -> float:
        return float(np.dot(self.probs, costs.to_array(self.K)))

    @classmethod
    def uniform(cls, K: int) -> 'ActionDistribution':
        return cls(np.full(K, 1.0 / K))


@dataclass(frozen=True)
class EstimatedCost:
    """Discretised estimate c-hat_t: either all-zero or a single spike K/gamma."""
    action: Optional[int] = None
    value: float = 0.0

    def __post_init__(self):
        if self.action is None:
            if self.value != 0.0:
                raise ValidationError("a zero estimate cannot carry a value")
        else:
            if not _is_index(self.action) or self.action < 0:
                raise ValidationError(f"spike action must be a non-negative integer, got {self.action!r}")
            if not self.value > 0.0:
                raise ValidationError(f"spike value must be positive, got {self.value!r}")
            object.__setattr__(self, 'action', int(self.action))
            object.__setattr__(self, 'value', float(self.value))

    @classmethod
    def spike(cls, action: int, K: int, gamma: float) -> 'EstimatedCost':
        return cls(action, K / gamma)

    @property
    def is_zero(self) -> bool:
        return self.action is None

    @property
    def kind(self) -> str:
        return 'zero' if self.is_zero else 'spike'

    def check_scale(self, K: int, gamma: float) -> 'EstimatedCost':
        if not self.is_zero:
            if self.action >= K:
                raise ValidationError(f"spike action {self.action} outside [0, {K})")
            if self.value != K / gamma:
                raise ValidationError(f"spike value {self.value!r} differs from K/gamma = {K / gamma!r}")
        return self

    def to_array(self, K: int) -> np.ndarray:
        arr = np.zeros(K)
        if not self.is_zero:
            arr[self.action] = self.value
        return arr


EstimatedCost.ZERO = EstimatedCost()

# Anything the oracle can sum over a past round
CostLike = Union[EstimatedCost, CostVector]


@dataclass(frozen=True)
class HallucinationStep:
    """One future round of a one-hot rollout: context, arm, sign and scale z."""
    context: Context
    arm: int
    sign: int
    z: float

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise ValidationError(f"sign must be -1 or +1, got {self.sign!r}")
        if not _is_index(self.arm) or self.arm < 0:
            raise ValidationError(f"arm must be a non-negative integer, got {self.arm!r}")
        if self.z < 0.0:
            raise ValidationError(f"z must be non-negative, got {self.z!r}")


@dataclass(frozen=True)
class DenseHallucinationStep:
    """One future round of a full-Rademacher rollout: a sign for every arm."""
    context: Context
    signs: Tuple[int, ...]
    z: float


@dataclass(frozen=True, eq=False)
class Rollout:
    """Hallucinated future rho_t = (x, epsilon, Z)_{t+1:T}, stored column-wise.

    A one-hot rollout has `arms` and `signs` of shape (n,); a dense rollout
    has `dense_signs` of shape (n, K) and leaves `arms`/`signs` empty.
    Identity is the cache key in the oracle, so equality is by identity.
    """
    contexts: np.ndarray
    z: np.ndarray
    K: int
    scale: float
    arms: Optional[np.ndarray] = None
    signs: Optional[np.ndarray] = None
    dense_signs: Optional[np.ndarray] = None

    def __post_init__(self):
        contexts = _frozen_array(self.contexts, np.int64)
        z = _frozen_array(self.z, float)
        n = contexts.size
        if contexts.ndim != 1 or z.shape != (n,):
            raise ValidationError("rollout contexts and z must be 1-d vectors of equal length")
        if n and not np.all((z == 0.0) | (z == self.scale)):
            raise ValidationError(f"every z must be exactly 0 or {self.scale!r}")
        object.__setattr__(self, 'contexts', contexts)
        object.__setattr__(self, 'z', z)
        if self.dense_signs is not None:
            dense = _frozen_array(self.dense_signs, np.int64).reshape(n, self.K)
            if n and not np.all(np.abs(dense) == 1):
                raise ValidationError("dense signs must be -1 or +1")
            object.__setattr__(self, 'dense_signs', dense)
        else:
            arms = _frozen_array(self.arms if self.arms is not None else [], np.int64)
            signs = _frozen_array(self.signs if self.signs is not None else [], np.int64)
            if arms.shape != (n,) or signs.shape != (n,):
                raise ValidationError("one-hot rollout needs one arm and one sign per step")
            if n and (arms.min() < 0 or arms.max() >= self.K or not np.all(np.abs(signs) == 1)):
                raise ValidationError("rollout arms must lie in [0, K) and signs in {-1, +1}")
            object.__setattr__(self, 'arms', arms)
            object.__setattr__(self, 'signs', signs)

    @classmethod
    def empty(cls, K: int, scale: float, dense: bool = False) -> 'Rollout':
        if dense:
            return cls(np.empty(0), np.empty(0), K, scale, dense_signs=np.empty((0, K)))
        return cls(np.empty(0), np.empty(0), K, scale, np.empty(0), np.empty(0))

    @classmethod
    def from_steps(cls, steps: Sequence[HallucinationStep], K: int, scale: float) -> 'Rollout':
        return cls(
            [s.context.id for s in steps], [s.z for s in steps], K, scale,
            [s.arm for s in steps], [s.sign for s in steps],
        )

    @property
    def dense(self) -> bool:
        return self.dense_signs is not None

    def __len__(self) -> int:
        return int(self.contexts.size)

    @property
    def steps(self) -> Tuple[Union[HallucinationStep, DenseHallucinationStep], ...]:
        if self.dense:
            return tuple(
                DenseHallucinationStep(Context(int(x)), tuple(int(s) for s in row), float(z))
                for x, row, z in zip(self.contexts, self.dense_signs, self.z)
            )
        return tuple(
            HallucinationStep(Context(int(x)), int(a), int(s), float(z))
            for x, a, s, z in zip(self.contexts, self.arms, self.signs, self.z)
        )

    def epsilon(self) -> np.ndarray:
        """Per-step epsilon vectors, shape (n, K)."""
        if self.dense:
            return self.dense_signs.astype(float)
        eps = np.zeros((len(self), self.K))
        eps[np.arange(len(self)), self.arms] = self.signs
        return eps


@dataclass(frozen=True)
class RoundRecord:
    """Everything that happened in one round of an episode."""
    t: int
    context: Context
    q: ActionDistribution
    action: int
    observed_cost: float
    estimate: EstimatedCost
    oracle_calls: int
    costs: CostVector

    def __post_init__(self):
        if not 0.0 <= self.observed_cost <= 1.0:
            raise ValidationError(f"observed cost {self.observed_cost!r} outside [0, 1]")
        if self.oracle_calls < 0:
            raise ValidationError(f"oracle call count must be non-negative, got {self.oracle_calls}")

    @property
    def expected_cost(self) -> float:
        """<q_t, c_t>, the round's contribution to expected regret."""
        return self.q.expected_cost(self.costs)


def policy_action(policy: Policy, context: Context) -> int:
    """Action the policy takes at a context.

    Raises:
        InputError: the context id lies outside the policy's table.
    """
    if not 0 <= context.id < policy.X:
        raise InputError(f"context {context.id} outside universe of size {policy.X}")
    return int(policy.table[context.id])


def validate_distribution(probs) -> ActionDistribution:
    """Accept a probability vector, absorbing float drift up to PROB_TOLERANCE.

    The vector is renormalised once; anything negative or further than the
    tolerance from summing to one is rejected.
    """
    arr = np.asarray(probs, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValidationError("probability vector must be a non-empty 1-d vector")
    if not np.all(np.isfinite(arr)) or arr.min() < 0.0:
        raise ValidationError(f"negative or non-finite probability in {arr.tolist()}")
    total = arr.sum()
    if abs(total - 1.0) > PROB_TOLERANCE:
        raise ValidationError(f"probabilities sum to {total!r}, not 1")
    return ActionDistribution(arr / total)
