"""Synthetic datasets with known structure."""

from pathlib import Path
from typing import List, Sequence, Tuple

import numpy as np

from graph.temporal_graph import EdgeRecord
from utils.rng import make_rng


def planted_transition_edges(
    num_nodes: int = 200,
    num_interactions: int = 20000,
    seed: int = 0,
    mean_gap: float = 60.0,
) -> List[EdgeRecord]:
    """
    Temporal network whose next neighbor is a function of the previous two.

    Half the nodes are sources, half targets. A fixed random table maps the
    (second-to-last, last) targets of a source to its next target, shifted
    by a per-source offset; sources take turns at random with exponential
    gaps between interactions.
    """
    rng = make_rng(seed, 0)
    n_src = num_nodes // 2
    n_dst = num_nodes - n_src
    table = rng.integers(n_dst, size=(n_dst, n_dst))
    offsets = rng.integers(n_dst, size=n_src)
    history = rng.integers(n_dst, size=(n_src, 2))

    records = []
    t = 0.0
    for _ in range(num_interactions):
        u = int(rng.integers(n_src))
        previous, last = history[u]
        nxt = int((table[previous, last] + offsets[u]) % n_dst)
        history[u] = (last, nxt)
        t += float(rng.exponential(mean_gap))
        records.append(EdgeRecord(src=f"u{u}", dst=f"i{nxt}", t=t))
    return records


def planted_separation(
    n: int = 2000,
    d: int = 16,
    positive_rate: float = 0.3,
    margin: float = 4.0,
    seed: int = 0,
    permute: bool = False,
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gaussian embeddings whose positives are shifted by `margin` along one direction.

    With `permute` the labels are shuffled, leaving no signal.
    """
    rng = make_rng(seed, 1)
    labels = (rng.random(n) < positive_rate).astype(np.int64)
    direction = rng.normal(size=d)
    direction /= np.linalg.norm(direction)
    embeddings = rng.normal(size=(n, d)) + margin * labels[:, None] * direction
    if permute:
        labels = rng.permutation(labels)
    return embeddings, labels


def write_edge_list(records: Sequence[EdgeRecord], path: Path) -> Path:
    """Write `src dst timestamp` lines (`src dst 1 timestamp feat ...` with features) under a `%` header."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write("% src dst timestamp\n")
        for rec in records:
            if rec.feat:
                feats = " ".join(f"{v:.6g}" for v in rec.feat)
                f.write(f"{rec.src} {rec.dst} 1 {rec.t!r} {feats}\n")
            else:
                f.write(f"{rec.src} {rec.dst} {rec.t!r}\n")
    return path


def write_embeddings(embeddings: np.ndarray, labels: np.ndarray, path: Path) -> Path:
    """CSV rows `label, x_1 .. x_d`."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, np.column_stack([labels, embeddings]), delimiter=",", fmt="%.8g")
    return path
