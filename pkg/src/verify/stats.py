"""
Running mean/variance accumulators and batched Monte-Carlo estimation.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..core.config import MC_BATCH_SIZE
from ..core.errors import InputError

logger = logging.getLogger(__name__)

# sampler(rng, n) -> n i.i.d. samples
Sampler = Callable[[np.random.Generator, int], np.ndarray]


@dataclass
class RunningStats:
    """Count, mean and sum of squared deviations of a sample."""
    n: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def push(self, value: float) -> 'RunningStats':
        self.n += 1
        delta = value - self.mean
        self.mean += delta / self.n
        self.m2 += delta * (value - self.mean)
        return self

    def extend(self, values: Sequence[float]) -> 'RunningStats':
        arr = np.asarray(values, dtype=float).ravel()
        if arr.size == 0:
            return self
        batch = RunningStats(int(arr.size), float(arr.mean()), float(((arr - arr.mean()) ** 2).sum()))
        return self.merge(batch)

    def merge(self, other: 'RunningStats') -> 'RunningStats':
        """Pool another accumulator into this one (pairwise update of Chan et al.)."""
        if other.n == 0:
            return self
        if self.n == 0:
            self.n, self.mean, self.m2 = other.n, other.mean, other.m2
            return self
        n = self.n + other.n
        delta = other.mean - self.mean
        self.mean += delta * other.n / n
        self.m2 += other.m2 + delta * delta * self.n * other.n / n
        self.n = n
        return self

    @property
    def variance(self) -> float:
        """Unbiased sample variance; 0 with fewer than two samples."""
        return self.m2 / (self.n - 1) if self.n > 1 else 0.0

    @property
    def std(self) -> float:
        return math.sqrt(max(self.variance, 0.0))

    @property
    def std_error(self) -> float:
        return math.sqrt(max(self.variance, 0.0) / self.n) if self.n else 0.0


def parallel_monte_carlo(sampler: Sampler, n_samples: int, rng: np.random.Generator,
                         jobs: int = 1, batch_size: int = MC_BATCH_SIZE) -> RunningStats:
    """Draw n_samples in batches, each with its own child generator.

    Children come from `rng.spawn` and batches are merged in batch order,
    so the result does not depend on `jobs`. The sampler must not share
    mutable state between calls.
    """
    if n_samples < 1:
        raise InputError(f"need at least one sample, got {n_samples}")
    if batch_size < 1:
        raise InputError(f"batch size must be positive, got {batch_size}")
    sizes = [batch_size] * (n_samples // batch_size)
    if n_samples % batch_size:
        sizes.append(n_samples % batch_size)
    children = rng.spawn(len(sizes))

    def run(index: int) -> RunningStats:
        return RunningStats().extend(sampler(children[index], sizes[index]))

    if jobs > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as executor:
            parts = list(executor.map(run, range(len(sizes))))
    else:
        parts = [run(i) for i in range(len(sizes))]

    total = RunningStats()
    for part in parts:
        total.merge(part)
    logger.debug("Monte-Carlo: %d samples in %d batches, mean %.6g, se %.3g",
                 total.n, len(sizes), total.mean, total.std_error)
    return total
