"""Deterministic random streams."""

import numpy as np


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """
    Build an independent generator for (seed, stream).

    Workers and purposes (sampling, dropout, negatives) each take their own
    stream id, so draws never depend on scheduling order.
    """
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(stream)]))


# Stream ids used across the package
STREAM_INIT = 0
STREAM_TRAIN_NEGATIVES = 1
STREAM_EVAL_NEGATIVES = 2
STREAM_DROPOUT = 3
STREAM_SAMPLER = 4
STREAM_HIDDEN_NODES = 5
STREAM_CLASSIFIER = 6
STREAM_SHUFFLE = 7
STREAM_TEST_NEGATIVES = 8
