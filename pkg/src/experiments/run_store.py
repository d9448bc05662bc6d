"""Run directory layout and persistence of configs, epoch logs and metric records."""

import json
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from utils.logger import get_logger

logger = get_logger(__name__)


class RunStore:
    """
    Files of one experiment under `<out>/<task>-<hash>/`.

    Each seed gets `seed-<s>/` with config.json, epochs.log, run.log,
    checkpoint.npz and metrics.jsonl; summary.json sits at the top.
    """

    def __init__(self, out: Path, task: str, config_hash: str):
        """Initialize the store and create the experiment directory."""
        self.config_hash = config_hash
        self.root = Path(out) / f"{task}-{config_hash}"
        self.root.mkdir(parents=True, exist_ok=True)

    def seed_dir(self, seed: int) -> Path:
        path = self.root / f"seed-{seed}"
        path.mkdir(parents=True, exist_ok=True)
        return path

    def checkpoint_path(self, seed: int) -> Path:
        return self.seed_dir(seed) / "checkpoint.npz"

    def log_path(self, seed: int) -> Path:
        return self.seed_dir(seed) / "run.log"

    def save_config(self, seed: int, config: Dict[str, Any]) -> Path:
        """Snapshot the configuration used for one seed."""
        path = self.seed_dir(seed) / "config.json"
        data = {
            'config': config,
            'config_hash': self.config_hash,
            'seed': seed,
            'created': datetime.now().isoformat(),
        }
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2, ensure_ascii=False)
        return path

    def append_epoch(self, seed: int, record: str) -> None:
        """Append one `key=value` epoch line to epochs.log."""
        with open(self.seed_dir(seed) / "epochs.log", 'a', encoding='utf-8') as f:
            f.write(record.rstrip("\n") + "\n")

    def append_metric(self, seed: int, metric: str, split: str, value: float, **fields) -> Dict[str, Any]:
        """Append a metric record (tagged with config hash and seed) to metrics.jsonl."""
        row = {
            'metric': metric,
            'split': split,
            'value': value,
            'seed': seed,
            'config_hash': self.config_hash,
            **fields,
        }
        with open(self.seed_dir(seed) / "metrics.jsonl", 'a', encoding='utf-8') as f:
            f.write(json.dumps(row, ensure_ascii=False) + "\n")
        return row

    def read_metrics(self, seed: int) -> List[Dict[str, Any]]:
        path = self.seed_dir(seed) / "metrics.jsonl"
        if not path.exists():
            return []
        with open(path, 'r', encoding='utf-8') as f:
            return [json.loads(line) for line in f if line.strip()]

    def save_summary(self, summary: Dict[str, Any]) -> Path:
        """Write summary.json for the whole experiment."""
        path = self.root / "summary.json"
        data = dict(summary, config_hash=self.config_hash, last_updated=datetime.now().isoformat())
        with open(path, 'w', encoding='utf-8') as f:
            json.dump(data, f, indent=2, ensure_ascii=False)
        logger.info("wrote %s", path)
        return path

    def load_summary(self) -> Optional[Dict[str, Any]]:
        """Load summary.json, or None if the experiment has not finished."""
        path = self.root / "summary.json"
        if not path.exists():
            return None
        try:
            with open(path, 'r', encoding='utf-8') as f:
                return json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            logger.warning("cannot read %s: %s", path, exc)
            return None
