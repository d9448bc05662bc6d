"""Utility functions for the TIP-GNN engine."""

from .config import Config
from .logger import setup_logger, get_logger, add_file_handler, format_record
from .rng import make_rng
from .errors import (
    TipGnnError,
    ConfigError,
    DatasetError,
    GraphError,
    SamplingError,
    ShapeError,
    NumericalError,
    MetricError,
    TrainingError,
    CheckpointError,
)

__all__ = [
    'Config', 'setup_logger', 'get_logger', 'add_file_handler', 'format_record', 'make_rng',
    'TipGnnError', 'ConfigError', 'DatasetError', 'GraphError', 'SamplingError',
    'ShapeError', 'NumericalError', 'MetricError', 'TrainingError', 'CheckpointError',
]
