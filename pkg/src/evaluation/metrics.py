"""Binary classification metrics over scored sets."""

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from utils.errors import MetricError


@dataclass(frozen=True)
class ScoredSet:
    """Probabilities with their 0/1 labels."""

    scores: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        scores = np.asarray(self.scores, dtype=np.float64).reshape(-1)
        labels = np.asarray(self.labels).reshape(-1)
        if len(scores) != len(labels):
            raise MetricError(f"{len(scores)} scores but {len(labels)} labels")
        if not np.all(np.isin(labels, (0, 1))):
            raise MetricError("labels must be 0 or 1")
        if np.any(~np.isfinite(scores)):
            raise MetricError("scores must be finite")
        object.__setattr__(self, "scores", scores)
        object.__setattr__(self, "labels", labels.astype(np.int64))

    def __len__(self) -> int:
        return len(self.scores)

    @property
    def n_positive(self) -> int:
        return int(self.labels.sum())

    @property
    def n_negative(self) -> int:
        return len(self) - self.n_positive

    @classmethod
    def from_pairs(cls, positive_scores, negative_scores) -> "ScoredSet":
        """
        Positives first, then negatives.

        average_precision keeps input order within ties, so a positive tied
        with a negative ranks above it and AP comes out at the optimistic
        end. AUC is unaffected.
        """
        pos = np.asarray(positive_scores, dtype=np.float64).reshape(-1)
        neg = np.asarray(negative_scores, dtype=np.float64).reshape(-1)
        return cls(np.concatenate([pos, neg]), np.concatenate([np.ones(len(pos)), np.zeros(len(neg))]))


def accuracy(s: ScoredSet, threshold: float = 0.5) -> float:
    """Fraction of items where (score >= threshold) equals the label."""
    if len(s) == 0:
        raise MetricError("accuracy of an empty set")
    return float(np.mean((s.scores >= threshold).astype(np.int64) == s.labels))


def auc_roc(s: ScoredSet) -> float:
    """
    Area under the ROC curve via the Mann-Whitney statistic.

    Tied scores get midranks, so every tied positive/negative pair counts 1/2.

    Raises:
        MetricError: If only one class is present
    """
    n_pos, n_neg = s.n_positive, s.n_negative
    if n_pos == 0 or n_neg == 0:
        raise MetricError(f"AUC needs both classes, got {n_pos} positives and {n_neg} negatives")
    ranks = rankdata(s.scores, method="average")
    u = ranks[s.labels == 1].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


def average_precision(s: ScoredSet) -> float:
    """
    Sum over the descending ranking of (R_k - R_{k-1}) * P_k.

    Equal scores keep their input order (stable sort), so the value is
    deterministic but depends on that order within ties. Sets built with
    ScoredSet.from_pairs put positives ahead of tied negatives, which can
    only raise AP.

    Raises:
        MetricError: If there is no positive
    """
    n_pos = s.n_positive
    if n_pos == 0:
        raise MetricError("average precision needs at least one positive")
    order = np.argsort(-s.scores, kind="stable")
    hits = s.labels[order]
    precision = np.cumsum(hits) / np.arange(1, len(hits) + 1)
    return float(precision[hits == 1].sum() / n_pos)
