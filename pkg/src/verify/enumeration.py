"""
Exact enumeration of the finite hallucinated-future distribution.

One step of a one-hot rollout takes X * (2K + 1) values: a context, then
either z = 0 or z = K/gamma together with one (arm, sign) pair. A dense
step takes X * (2^K + 1) values. When z = 0 the arm and signs do not
affect anything, so the z = 0 atom carries a fixed placeholder.
"""
import itertools
import logging
from typing import Iterator, Optional, Sequence, Tuple

import numpy as np

from ..core.config import EXACT_ATOM_LIMIT
from ..core.errors import ConfigurationError, InputError
from ..core.oracle import ExhaustiveErmOracle, PastEntry
from ..core.types import PolicyClass, Rollout
from ..envs.contexts import ContextDistribution

logger = logging.getLogger(__name__)

# rows of chunked policy-by-atom evaluation
_CHUNK = 50_000


def atoms_per_step(K: int, X: int, dense: bool = False) -> int:
    return X * ((2 ** K if dense else 2 * K) + 1)


def rollout_atom_count(n_steps: int, K: int, X: int, dense: bool = False) -> int:
    return atoms_per_step(K, X, dense) ** n_steps


def _step_atoms(K: int, gamma: float, context_dist: ContextDistribution, dense: bool):
    """Per-step support: probabilities, contexts, z values and epsilon rows."""
    scale = K / gamma
    probs, contexts, zs, eps = [], [], [], []
    for x, p_x in enumerate(context_dist.probs):
        probs.append(p_x * (1.0 - gamma))
        contexts.append(x)
        zs.append(0.0)
        eps.append(np.zeros(K))
        if dense:
            for signs in itertools.product((-1.0, 1.0), repeat=K):
                probs.append(p_x * gamma / 2 ** K)
                contexts.append(x)
                zs.append(scale)
                eps.append(np.array(signs))
        else:
            for arm in range(K):
                for sign in (-1.0, 1.0):
                    row = np.zeros(K)
                    row[arm] = sign
                    probs.append(p_x * gamma / (2 * K))
                    contexts.append(x)
                    zs.append(scale)
                    eps.append(row)
    return np.array(probs), np.array(contexts, dtype=np.int64), np.array(zs), np.stack(eps)


def rollout_atoms(n_steps: int, K: int, gamma: float, context_dist: ContextDistribution,
                  dense: bool = False) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """All rollout atoms with non-zero probability, column-wise.

    Returns:
        probs (N,), contexts (N, n), z (N, n) and epsilon (N, n, K).
    """
    if not 0.0 < gamma <= 1.0:
        raise InputError(f"gamma must lie in (0, 1], got {gamma!r}")
    if n_steps < 0:
        raise InputError(f"number of steps must be non-negative, got {n_steps}")
    count = rollout_atom_count(n_steps, K, context_dist.X, dense)
    if count > EXACT_ATOM_LIMIT:
        raise ConfigurationError(f"{count} rollout atoms exceed the exact-enumeration limit {EXACT_ATOM_LIMIT}")
    if n_steps == 0:
        return np.ones(1), np.zeros((1, 0), dtype=np.int64), np.zeros((1, 0)), np.zeros((1, 0, K))
    p, x, z, e = _step_atoms(K, gamma, context_dist, dense)
    keep = p > 0.0
    p, x, z, e = p[keep], x[keep], z[keep], e[keep]
    idx = np.indices((p.size,) * n_steps).reshape(n_steps, -1).T
    return p[idx].prod(axis=1), x[idx], z[idx], e[idx]


def enumerate_rollouts(n_steps: int, K: int, gamma: float, context_dist: ContextDistribution,
                       dense: bool = False) -> Iterator[Tuple[float, Rollout]]:
    """Yield (probability, rollout) over the whole support; probabilities sum to 1."""
    probs, contexts, z, eps = rollout_atoms(n_steps, K, gamma, context_dist, dense)
    scale = K / gamma
    for i in range(probs.size):
        if dense:
            signs = np.where(eps[i] == 0.0, 1, eps[i]).astype(np.int64)
            yield float(probs[i]), Rollout(contexts[i], z[i], K, scale, dense_signs=signs)
        else:
            arms = np.abs(eps[i]).argmax(axis=1)
            signs = np.where(z[i] > 0.0, eps[i][np.arange(n_steps), arms], 1.0).astype(np.int64)
            yield float(probs[i]), Rollout(contexts[i], z[i], K, scale, arms, signs)


def future_totals(policy_class: PolicyClass, contexts: np.ndarray, z: np.ndarray, eps: np.ndarray) -> np.ndarray:
    """sum_tau 2 z_tau eps_tau(pi(x_tau)) for every policy and atom, shape (|Pi|, N)."""
    N, n = contexts.shape
    if n == 0:
        return np.zeros((policy_class.size, N))
    actions = policy_class.tables[:, contexts]
    picked = eps[np.arange(N)[None, :, None], np.arange(n)[None, None, :], actions]
    return 2.0 * (z[None, :, :] * picked).sum(axis=2)


def exact_rel(history: Sequence[PastEntry], t: int, T: int, gamma: float, K: int,
              policy_class: PolicyClass, context_dist: ContextDistribution,
              dense: bool = False, past: Optional[np.ndarray] = None) -> float:
    """Rel(I_{1:t}) as an exact probability-weighted sum over rollout atoms.

    Args:
        past: per-policy past cost, if already known; otherwise summed from history.
    """
    if not 0 <= t <= T:
        raise InputError(f"round {t} outside [0, {T}]")
    if past is None:
        past = ExhaustiveErmOracle(policy_class, use_cache=False).policy_costs_of_past(history)
    probs, contexts, z, eps = rollout_atoms(T - t, K, gamma, context_dist, dense)
    total = 0.0
    for start in range(0, probs.size, _CHUNK):
        stop = start + _CHUNK
        totals = past[:, None] + future_totals(policy_class, contexts[start:stop], z[start:stop], eps[start:stop])
        total += float(np.dot(probs[start:stop], gamma * (T - t) - totals.min(axis=0)))
    return total
