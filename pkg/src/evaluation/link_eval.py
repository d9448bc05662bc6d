"""Link-prediction evaluation against fixed negatives."""

from dataclasses import asdict, dataclass
from typing import Tuple

import numpy as np

from graph.sampling import negative_sample
from graph.temporal_graph import TemporalGraph
from utils.errors import MetricError, SamplingError
from utils.logger import get_logger
from .metrics import ScoredSet, accuracy, auc_roc, average_precision

logger = get_logger(__name__)


@dataclass(frozen=True)
class LinkMetrics:
    accuracy: float
    auc: float
    ap: float
    n_positive: int
    n_negative: int
    skipped: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


def draw_eval_negatives(
    g: TemporalGraph, positions, rng: np.random.Generator
) -> Tuple[np.ndarray, np.ndarray]:
    """
    One eval-mode negative destination per interaction, drawn independently.

    Interactions whose source has no non-neighbor are dropped with a warning.

    Returns:
        (kept positions, negative node per kept position)
    """
    positions = np.asarray(positions, dtype=np.int64)
    kept, negatives = [], []
    for pos in positions.tolist():
        u = int(g.src[pos])
        try:
            negatives.append(negative_sample(g, u, float(g.ts[pos]), "eval", rng))
        except SamplingError:
            continue
        kept.append(pos)
    skipped = len(positions) - len(kept)
    if skipped:
        logger.warning("skipped %d evaluation interactions whose source has no non-neighbor", skipped)
    return np.asarray(kept, dtype=np.int64), np.asarray(negatives, dtype=np.int64)


def evaluate_links(
    model,
    g: TemporalGraph,
    positions,
    negatives,
    chunk_size: int = 200,
    skipped: int = 0,
) -> LinkMetrics:
    """
    Score each interaction and its paired negative, then compute metrics.

    Raises:
        MetricError: If there is nothing to evaluate
    """
    positions = np.asarray(positions, dtype=np.int64)
    negatives = np.asarray(negatives, dtype=np.int64)
    if len(positions) == 0:
        raise MetricError("no interactions to evaluate")
    was_training = model.training
    model.eval()
    try:
        src, times = g.src[positions], g.ts[positions]
        pos_scores = model.score_links(g, src, g.dst[positions], times, chunk_size)
        neg_scores = model.score_links(g, src, negatives, times, chunk_size)
    finally:
        model.train(was_training)
    scored = ScoredSet.from_pairs(pos_scores, neg_scores)
    return LinkMetrics(
        accuracy=accuracy(scored),
        auc=auc_roc(scored),
        ap=average_precision(scored),
        n_positive=len(pos_scores),
        n_negative=len(neg_scores),
        skipped=skipped,
    )
