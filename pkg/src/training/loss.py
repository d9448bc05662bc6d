"""Negative-sampling cross-entropy for temporal link prediction."""

from typing import Optional

import numpy as np

from graph.sampling import negative_sample_batch
from graph.temporal_graph import TemporalGraph
from tensor import Tensor, concat, log_sigmoid, neg, scale, tsum
from utils.errors import TrainingError


def link_loss(
    model,
    g: TemporalGraph,
    src,
    dst,
    times,
    rng: Optional[np.random.Generator] = None,
    neg_samples: int = 1,
    negatives: Optional[np.ndarray] = None,
) -> Tensor:
    """
    Mean over positives of -[log p(u, v, t) + sum_c log(1 - p(u, j_c, t))].

    Negatives j ~ uniform over all nodes, `neg_samples` per positive, unless
    `negatives` (shape (n,) or (n, c)) is given. log(1 - sigmoid(x)) is
    computed as log_sigmoid(-x).

    Raises:
        TrainingError: On an empty batch
    """
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    times = np.asarray(times, dtype=np.float64)
    n = len(src)
    if n == 0:
        raise TrainingError("link_loss received an empty batch")
    if negatives is None:
        if rng is None:
            raise TrainingError("link_loss needs an rng or explicit negatives")
        negatives = negative_sample_batch(g, n * neg_samples, rng).reshape(n, neg_samples)
    negatives = np.asarray(negatives, dtype=np.int64).reshape(n, -1)
    c = negatives.shape[1]

    # positives first, then negatives column by column: one embedding pass
    all_src = np.concatenate([src] + [src] * c)
    all_dst = np.concatenate([dst] + [negatives[:, j] for j in range(c)])
    all_t = np.concatenate([times] * (c + 1))
    logits = model.link_logits(g, all_src, all_dst, all_t)

    positive = log_sigmoid(logits[:n])
    negative = log_sigmoid(neg(logits[n:]))
    per_positive = concat([positive, tsum(negative.reshape(c, n), axis=0)], axis=0)
    return scale(tsum(per_positive), -1.0 / n)
