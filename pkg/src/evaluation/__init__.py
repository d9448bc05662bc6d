"""Metrics, link-prediction evaluation and downstream node classification."""

from .metrics import ScoredSet, accuracy, auc_roc, average_precision
from .link_eval import LinkMetrics, draw_eval_negatives, evaluate_links
from .node_classification import (
    NodeClassifier,
    NodeClassificationResult,
    extract_interaction_embeddings,
    node_classification,
    oversample_positives,
)

__all__ = [
    'ScoredSet', 'accuracy', 'auc_roc', 'average_precision',
    'LinkMetrics', 'draw_eval_negatives', 'evaluate_links',
    'NodeClassifier', 'NodeClassificationResult', 'extract_interaction_embeddings',
    'node_classification', 'oversample_positives',
]
