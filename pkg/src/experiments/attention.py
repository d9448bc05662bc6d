"""Export of last-layer per-step fusion weights."""

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from graph.temporal_graph import TemporalGraph
from utils.logger import get_logger

logger = get_logger(__name__)


@dataclass
class AttentionTable:
    """Fusion weights (one row per (node, time) query, one column per step)."""

    nodes: np.ndarray
    times: np.ndarray
    weights: np.ndarray

    @property
    def steps(self) -> int:
        return self.weights.shape[1]

    @property
    def mean(self) -> np.ndarray:
        return self.weights.mean(axis=0) if len(self.weights) else np.zeros(self.steps)

    def write_csv(self, path: Path, node_names=None) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f)
            writer.writerow(["node", "t"] + [f"step_{k}" for k in range(self.steps)])
            for node, t, row in zip(self.nodes.tolist(), self.times.tolist(), self.weights):
                name = node_names[node] if node_names is not None else node
                writer.writerow([name, repr(t)] + [f"{w:.10g}" for w in row])
            writer.writerow(["mean", ""] + [f"{w:.10g}" for w in self.mean])
        return path


def export_attention(
    model,
    g: TemporalGraph,
    positions=None,
    limit: Optional[int] = None,
    rng: Optional[np.random.Generator] = None,
) -> AttentionTable:
    """
    Fusion weights of the last layer for the sources of sampled interactions.

    Args:
        positions: Interactions whose (src, t) are queried; all when omitted
        limit: Draw at most this many positions (without replacement, sorted)
    """
    positions = np.arange(g.num_edges) if positions is None else np.asarray(positions, dtype=np.int64)
    if limit is not None and len(positions) > limit:
        rng = rng if rng is not None else np.random.default_rng(0)
        positions = np.sort(rng.choice(positions, size=limit, replace=False))
    model.eval()
    nodes, times = g.src[positions], g.ts[positions]
    weights = model.attention_weights(g, nodes, times)
    table = AttentionTable(nodes=np.asarray(nodes), times=np.asarray(times), weights=weights)
    logger.info("exported fusion weights for %d queries; mean per step %s", len(positions), np.round(table.mean, 4).tolist())
    return table
