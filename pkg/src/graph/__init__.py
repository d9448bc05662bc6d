"""Temporal interaction store, chronological splits and samplers."""

from .temporal_graph import EdgeRecord, Interaction, TemporalGraph, GraphStatistics, build_graph
from .splits import (
    SplitRanges,
    EdgeSplit,
    chronological_split,
    remove_new_nodes,
    hide_nodes_for_inductive,
    transductive_split,
)
from .sampling import (
    SampledContext,
    NeighborBatch,
    sample_recent,
    recursive_sample,
    sample_batch,
    negative_sample,
    negative_sample_batch,
)

__all__ = [
    'EdgeRecord', 'Interaction', 'TemporalGraph', 'GraphStatistics', 'build_graph',
    'SplitRanges', 'EdgeSplit', 'chronological_split', 'remove_new_nodes',
    'hide_nodes_for_inductive', 'transductive_split',
    'SampledContext', 'NeighborBatch', 'sample_recent', 'recursive_sample', 'sample_batch',
    'negative_sample', 'negative_sample_batch',
]
