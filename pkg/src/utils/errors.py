"""Exception hierarchy. Each class carries the CLI exit code of its category."""

from typing import Optional


class TipGnnError(Exception):
    """Base error for the engine."""

    exit_code = 1


class ConfigError(TipGnnError):
    """Invalid configuration value or field combination."""

    exit_code = 2

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class DatasetError(TipGnnError):
    """Malformed or inconsistent input data."""

    exit_code = 3

    def __init__(self, message: str, line: Optional[int] = None, record=None):
        location = f"line {line}: " if line is not None else ""
        super().__init__(f"{location}{message}")
        self.line = line
        self.record = record


class GraphError(TipGnnError):
    """Invalid operation on a temporal graph (bad split, bad fraction...)."""

    exit_code = 3


class SamplingError(GraphError):
    """No valid sample exists, e.g. no non-neighbor for an eval negative."""


class ShapeError(TipGnnError):
    """Incompatible tensor shapes."""

    exit_code = 4

    def __init__(self, op: str, left, right=None):
        if right is None:
            message = f"{op}: invalid shape {tuple(left)}"
        else:
            message = f"{op}: incompatible shapes {tuple(left)} and {tuple(right)}"
        super().__init__(message)
        self.op = op
        self.shapes = (left, right)


class NumericalError(TipGnnError):
    """NaN or Inf found in gradients or parameters."""

    exit_code = 4


class MetricError(TipGnnError):
    """Metric undefined for the given scores/labels."""

    exit_code = 5


class TrainingError(TipGnnError):
    """Training loop contract violated (empty batch, leakage...)."""

    exit_code = 6


class CheckpointError(TipGnnError):
    """Unreadable or incompatible checkpoint."""

    exit_code = 7
