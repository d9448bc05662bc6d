"""Patience-based early stopping."""

from typing import Optional


class EarlyStopMonitor:
    """
    Patience counter on a higher-is-better metric.

    `update` returns True once the metric failed to improve on the best value
    for `patience` consecutive epochs.
    """

    def __init__(self, patience: int = 3, tolerance: float = 0.0):
        self.patience = patience
        self.tolerance = tolerance
        self.best_value: Optional[float] = None
        self.best_epoch = 0
        self.epoch = 0
        self.bad_epochs = 0

    def update(self, value: float) -> bool:
        self.epoch += 1
        if self.best_value is None or value > self.best_value + self.tolerance:
            self.best_value = value
            self.best_epoch = self.epoch
            self.bad_epochs = 0
        else:
            self.bad_epochs += 1
        return self.bad_epochs >= self.patience

    @property
    def improved(self) -> bool:
        return self.bad_epochs == 0
