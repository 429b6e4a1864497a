"""
Named, independent random streams for one simulation run.
"""
from dataclasses import dataclass

import numpy as np

from .config import STREAM_IDS

# check streams take one-element spawn keys; run streams take (seed, stream id)
CHECK_STREAM_BASE = 1000


@dataclass(frozen=True)
class RunStreams:
    """One generator per source of randomness in a run.

    `context` and `adversary` drive the environment and are identical for
    every learner run under the same seed (common random numbers); the other
    three belong to the learner.
    """
    context: np.random.Generator
    adversary: np.random.Generator
    rollout: np.random.Generator
    action: np.random.Generator
    estimator: np.random.Generator


def stream_seed(master_seed: int, seed: int, name: str) -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(seed), STREAM_IDS[name]))


def make_streams(master_seed: int, seed: int) -> RunStreams:
    """Derive the five run streams from the master seed and the run seed."""
    return RunStreams(**{
        name: np.random.default_rng(stream_seed(master_seed, seed, name))
        for name in STREAM_IDS
    })


def check_rng(master_seed: int, check_index: int) -> np.random.Generator:
    """Generator for one verification check, disjoint from every run stream."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=int(master_seed), spawn_key=(CHECK_STREAM_BASE + int(check_index),)))
