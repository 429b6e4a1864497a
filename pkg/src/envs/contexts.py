"""
Known categorical context distribution D.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..core.config import PROB_TOLERANCE
from ..core.errors import ValidationError
from ..core.types import Context


@dataclass(frozen=True, eq=False)
class ContextDistribution:
    """Categorical distribution over the context universe {0, ..., X-1}."""
    probs: np.ndarray

    def __post_init__(self):
        arr = np.array(self.probs, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise ValidationError("context distribution must be a non-empty 1-d vector")
        if not np.all(np.isfinite(arr)) or arr.min() < 0.0:
            raise ValidationError(f"context probabilities must be non-negative, got {arr.tolist()}")
        if abs(arr.sum() - 1.0) > PROB_TOLERANCE:
            raise ValidationError(f"context probabilities sum to {arr.sum()!r}, not 1")
        arr = arr / arr.sum()
        arr.setflags(write=False)
        object.__setattr__(self, 'probs', arr)

    @classmethod
    def uniform(cls, X: int) -> 'ContextDistribution':
        return cls(np.full(X, 1.0 / X))

    @property
    def X(self) -> int:
        return int(self.probs.size)

    def sample(self, rng: np.random.Generator, size: Optional[int] = None):
        """Context ids drawn i.i.d.; an int when size is None, else an array."""
        return rng.choice(self.X, size=size, p=self.probs)


def sample_context(dist: ContextDistribution, rng: np.random.Generator) -> Context:
    return Context(int(dist.sample(rng)), dist.X)
