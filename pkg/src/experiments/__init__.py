"""Experiment orchestration: datasets, configuration, runs and exports."""

from .config import ExperimentConfig, TASKS, DATASET_FORMATS, parse_config_file
from .datasets import parse_dataset, read_edge_records, read_node_features, read_labels, labels_by_position
from .run_store import RunStore
from .runner import (
    SeedResult,
    ExperimentResult,
    aggregate,
    run_seed,
    run_experiment,
    parse_sweep,
    ablate,
    evaluate_checkpoint,
)
from .attention import AttentionTable, export_attention
from .synthetic import planted_transition_edges, planted_separation, write_edge_list, write_embeddings

__all__ = [
    'ExperimentConfig', 'TASKS', 'DATASET_FORMATS', 'parse_config_file',
    'parse_dataset', 'read_edge_records', 'read_node_features', 'read_labels', 'labels_by_position',
    'RunStore', 'SeedResult', 'ExperimentResult', 'aggregate', 'run_seed', 'run_experiment',
    'parse_sweep', 'ablate', 'evaluate_checkpoint',
    'AttentionTable', 'export_attention',
    'planted_transition_edges', 'planted_separation', 'write_edge_list', 'write_embeddings',
]
