"""Sequence translation: transition matrices, incidence matrices, edge features."""

from .transition import TransitionBundle, build_transition, neighbor_sequence, stack_edge_features
from .cache import TransitionCache
from .batch import ContextBatch, build_context_batch

__all__ = [
    'TransitionBundle', 'build_transition', 'neighbor_sequence', 'stack_edge_features',
    'TransitionCache', 'ContextBatch', 'build_context_batch',
]
