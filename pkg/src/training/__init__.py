"""Negative-sampling training loop with Adam and early stopping."""

from .config import TrainConfig
from .optimizer import Adam
from .loss import link_loss
from .early_stop import EarlyStopMonitor
from .trainer import EpochRecord, TrainingReport, chronological_batches, fit, train_step

__all__ = [
    'TrainConfig', 'Adam', 'link_loss',
    'EarlyStopMonitor', 'EpochRecord', 'TrainingReport', 'chronological_batches', 'fit', 'train_step',
]
