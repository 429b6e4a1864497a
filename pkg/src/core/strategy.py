"""
Per-round strategy: psi values from K + 1 oracle calls, water-filling for
q*_t, and exploration mixing for q_t.

For a fixed rollout the minimax problem over q in the simplex and over
adversarial estimate distributions with per-spike mass at most gamma/K
reduces to minimising sum_i (q(i) - eta_i)^+ with
eta_i = gamma (psi_i - psi_0) / K; water-filling solves it in O(K).
"""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .config import ORACLE_TOLERANCE
from .errors import ValidationError
from .oracle import ErmOracle, ErmQuery, ExhaustiveErmOracle, PastEntry
from .types import ActionDistribution, Context, PolicyClass, Rollout, validate_distribution


@dataclass(frozen=True, eq=False)
class PsiVector:
    """psi[0] is the no-spike value; psi[i] puts a K/gamma spike on action i - 1 at x_t."""
    psi: np.ndarray
    scale: Optional[float] = None

    def __post_init__(self):
        arr = np.array(self.psi, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise ValidationError("psi needs a baseline and at least one spiked value")
        if self.scale is not None and np.any(arr[1:] > arr[0] + self.scale + ORACLE_TOLERANCE):
            raise ValidationError("a spike can raise psi by at most K/gamma")
        arr.setflags(write=False)
        object.__setattr__(self, 'psi', arr)

    @property
    def K(self) -> int:
        return int(self.psi.size - 1)

    def __getitem__(self, index: int) -> float:
        return float(self.psi[index])


def compute_psi(history: Sequence[PastEntry], rollout: Rollout, x_t: Context, gamma: float, K: int,
                oracle: Optional[ErmOracle] = None, policy_class: Optional[PolicyClass] = None) -> PsiVector:
    """Evaluate psi_0..psi_K with exactly K + 1 oracle calls."""
    if oracle is None:
        oracle = ExhaustiveErmOracle(policy_class)
    scale = K / gamma
    values = [oracle.value_of_erm(ErmQuery(past=history, future=rollout, current_context=x_t)).value]
    for action in range(K):
        query = ErmQuery(past=history, spike_override=(action, scale), future=rollout, current_context=x_t)
        values.append(oracle.value_of_erm(query).value)
    return PsiVector(np.array(values), scale)


def eta_from_psi(psi: PsiVector, gamma: float, K: int) -> np.ndarray:
    """eta_i = gamma (psi_i - psi_0) / K for i = 1..K (returned 0-indexed)."""
    return gamma * (psi.psi[1:] - psi.psi[0]) / K


def water_fill(eta) -> ActionDistribution:
    """Fill q(i) up to max(eta_i, 0) in index order until mass 1 is used.

    Whatever mass is left is spread evenly over all K coordinates.
    """
    eta = np.asarray(eta, dtype=float)
    K = eta.size
    q = np.zeros(K)
    m = 1.0
    for i in range(K):
        q[i] = min(max(eta[i], 0.0), m)
        m -= q[i]
    if m > 0.0:
        q += m / K
    return validate_distribution(q)


def mix_exploration(q_star: ActionDistribution, gamma: float, K: int) -> ActionDistribution:
    """q_t = (1 - gamma) q*_t + gamma/K, which guarantees min q_t >= gamma/K."""
    if q_star.K != K:
        raise ValidationError(f"q* has {q_star.K} actions, expected {K}")
    return validate_distribution((1.0 - gamma) * q_star.probs + gamma / K)


def waterfill_objective(q, eta) -> float:
    """sum_i (q(i) - eta_i)^+."""
    q = q.probs if isinstance(q, ActionDistribution) else np.asarray(q, dtype=float)
    return float(np.maximum(q - np.asarray(eta, dtype=float), 0.0).sum())


def optimal_objective(eta) -> float:
    """Closed-form minimum of waterfill_objective over the simplex.

    Coordinates with eta_i < 0 cost -eta_i even at zero mass, and any mass
    beyond sum eta^+ costs one unit per unit.
    """
    eta = np.asarray(eta, dtype=float)
    positive = np.maximum(eta, 0.0)
    return float(np.maximum(-eta, 0.0).sum() + max(0.0, 1.0 - positive.sum()))


def worst_case_value(q, psi: PsiVector, gamma: float, K: int, t: int, T: int) -> float:
    """sup over admissible estimate laws of E[<q, c_hat> + R] for a fixed rollout.

    R is evaluated at round t with the current estimate appended, so its
    constant is gamma (T - t).
    """
    eta = eta_from_psi(psi, gamma, K)
    return gamma * (T - t) - psi[0] + waterfill_objective(q, eta)


def compute_strategy(history: Sequence[PastEntry], rollout: Rollout, x_t: Context, gamma: float, K: int,
                     oracle: ErmOracle) -> Tuple[ActionDistribution, ActionDistribution, PsiVector]:
    """Run the whole pipeline; returns (q_t, q*_t, psi)."""
    psi = compute_psi(history, rollout, x_t, gamma, K, oracle)
    q_star = water_fill(eta_from_psi(psi, gamma, K))
    return mix_exploration(q_star, gamma, K), q_star, psi
