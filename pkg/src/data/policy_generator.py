"""
Policy class construction: explicit tables, versioned random tables and
the complete lookup-table class.
"""
import itertools
import logging

import numpy as np

from ..core.config import POLICY_GENERATOR_VERSION
from ..core.errors import ConfigurationError
from ..core.types import PolicyClass

logger = logging.getLogger(__name__)

# entropy tag separating policy generation from every run stream
_GENERATOR_TAG = 0x5051


def random_policy_class(size: int, X: int, K: int, seed: int,
                        version: int = POLICY_GENERATOR_VERSION) -> PolicyClass:
    """|Pi| uniform-random lookup tables drawn from a named seed.

    The (seed, version) pair fixes the tables; a new generation scheme must
    get a new version number instead of changing this one.
    """
    if version != 1:
        raise ConfigurationError(f"unknown policy generator version {version}")
    if size < 1 or X < 1 or K < 1:
        raise ConfigurationError(f"random policy class needs size, X, K >= 1, got ({size}, {X}, {K})")
    rng = np.random.default_rng(np.random.SeedSequence([_GENERATOR_TAG, version, int(seed)]))
    tables = rng.integers(0, K, size=(size, X))
    logger.debug("Generated %d random policies over X=%d, K=%d from seed %d (v%d)", size, X, K, seed, version)
    return PolicyClass(tables, K)


def complete_policy_class(X: int, K: int) -> PolicyClass:
    """All K^X lookup tables, in lexicographic order."""
    if K ** X > 1_000_000:
        raise ConfigurationError(f"complete class would hold {K ** X} policies")
    return PolicyClass(np.array(list(itertools.product(range(K), repeat=X))), K)


def policy_class_from_tables(tables, K: int) -> PolicyClass:
    try:
        return PolicyClass(np.asarray(tables), K)
    except ValueError as e:
        raise ConfigurationError(f"invalid policy tables: {e}") from e
