"""Experiment configuration: flat key-value files, CLI overrides and a stable hash."""

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional

from model.config import TipGnnConfig
from training.config import TrainConfig
from utils.config import Config
from utils.errors import ConfigError

TASKS = ("link_transductive", "link_inductive", "node_classification")
DATASET_FORMATS = ("edge_list", "csv_with_features")

# keys that change where or how fast a run goes, not what it computes
_UNHASHED = ("seeds", "out", "workers", "quiet")


@dataclass
class ExperimentConfig:
    """One experiment: dataset, task, model and training settings, seeds."""

    dataset: str = ""
    format: str = "edge_list"
    has_weight: bool = True
    task: str = "link_transductive"
    node_features: Optional[str] = None
    labels: Optional[str] = None
    seeds: List[int] = field(default_factory=lambda: list(Config.DEFAULT_SEEDS))
    out: str = Config.OUTPUT_DIR
    workers: int = Config.WORKERS
    hidden_fraction: float = 0.10
    model: TipGnnConfig = field(default_factory=TipGnnConfig)
    train: TrainConfig = field(default_factory=TrainConfig)

    def validate(self) -> "ExperimentConfig":
        """
        Raises:
            ConfigError: Naming the first invalid field or combination
        """
        if not self.dataset:
            raise ConfigError("a dataset path is required", "dataset")
        if self.format not in DATASET_FORMATS:
            raise ConfigError(f"must be one of {DATASET_FORMATS}", "format")
        if self.task not in TASKS:
            raise ConfigError(f"must be one of {TASKS}", "task")
        if self.task == "node_classification" and not self.labels:
            raise ConfigError("node_classification needs a label file", "labels")
        if self.model.node_feature_mode == "table" and not self.node_features:
            raise ConfigError("node_feature_mode=table needs a node feature file", "node_features")
        if not self.seeds:
            raise ConfigError("at least one seed is required", "seeds")
        if self.workers < 1:
            raise ConfigError("must be >= 1", "workers")
        if not 0.0 < self.hidden_fraction < 1.0:
            raise ConfigError(f"must be in (0, 1), got {self.hidden_fraction}", "hidden_fraction")
        self.model.validate()
        self.train.validate()
        return self

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    def config_hash(self) -> str:
        """First 12 hex chars of sha256 over the sorted JSON of result-relevant fields."""
        snapshot = {k: v for k, v in self.to_dict().items() if k not in _UNHASHED}
        snapshot["train"] = {k: v for k, v in snapshot["train"].items() if k not in ("seed", "quiet")}
        blob = json.dumps(snapshot, sort_keys=True, default=str).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()[:12]

    def with_overrides(self, values: Mapping[str, Any]) -> "ExperimentConfig":
        """Apply flat `key -> value` overrides (strings are parsed by field type)."""
        for key, value in values.items():
            if value is None:
                continue
            target, name = _locate(self, key)
            setattr(target, name, _coerce(target, name, value))
        return self

    @classmethod
    def from_file(cls, path: Path, overrides: Optional[Mapping[str, Any]] = None) -> "ExperimentConfig":
        cfg = cls().with_overrides(parse_config_file(path))
        if overrides:
            cfg.with_overrides(overrides)
        return cfg


def _locate(cfg: ExperimentConfig, key: str):
    key = key.strip().replace("-", "_")
    for target in (cfg, cfg.model, cfg.train):
        if key in {f.name for f in fields(target)} and key not in ("model", "train"):
            return target, key
    raise ConfigError(f"unknown configuration key {key!r}", key)


def _coerce(target, name: str, value: Any) -> Any:
    current = getattr(target, name)
    if not isinstance(value, str):
        return list(value) if isinstance(current, list) else value
    text = value.strip()
    try:
        if isinstance(current, bool):
            lowered = text.lower()
            if lowered not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(text)
            return lowered in ("true", "1", "yes")
        if isinstance(current, int):
            return int(text)
        if isinstance(current, float):
            return float(text)
        if isinstance(current, list):
            return [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise ConfigError(f"cannot parse {text!r} as {type(current).__name__}", name) from None
    if current is None:
        return text or None
    return text


def parse_config_file(path: Path) -> Dict[str, str]:
    """
    Read `key = value` lines; `#` starts a comment, blank lines are skipped.

    Raises:
        ConfigError: On a line without `=` or an unreadable file
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    values: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{number}: expected `key = value`, got {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values
