"""Chronological splits and the transductive/inductive filters."""

from dataclasses import dataclass, field
from typing import FrozenSet, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from utils.errors import GraphError
from utils.logger import get_logger
from utils.rng import make_rng, STREAM_HIDDEN_NODES
from .temporal_graph import TemporalGraph

logger = get_logger(__name__)

DEFAULT_RATIOS = (0.70, 0.15, 0.15)


class SplitRanges(NamedTuple):
    train: range
    val: range
    test: range


@dataclass
class EdgeSplit:
    """
    Interaction positions used for training and evaluation.

    `train_graph`, when set, is the graph the sampler may see during training
    (inductive runs drop the hidden nodes' interactions from it).
    """

    train: np.ndarray
    val: np.ndarray
    test: np.ndarray
    ranges: SplitRanges
    hidden_nodes: FrozenSet[int] = field(default_factory=frozenset)
    train_graph: Optional[TemporalGraph] = None

    @property
    def train_boundary(self) -> int:
        return self.ranges.train.stop


def chronological_split(g: TemporalGraph, ratios: Sequence[float] = DEFAULT_RATIOS) -> SplitRanges:
    """
    Split the sorted interaction list into contiguous train/val/test ranges.

    Boundaries sit at floor(r0*|E|) and floor((r0+r1)*|E|); ties in time are
    already ordered by edge_index, so equal timestamps split by position.

    Raises:
        GraphError: If ratios are invalid or |E| < 3
    """
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != 3 or any(r < 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise GraphError(f"split ratios must be three non-negative numbers summing to 1, got {ratios}")
    n = g.num_edges
    if n < 3:
        raise GraphError(f"chronological split needs at least 3 interactions, got {n}")
    first = int(np.floor(ratios[0] * n + 1e-9))
    second = int(np.floor((ratios[0] + ratios[1]) * n + 1e-9))
    return SplitRanges(range(0, first), range(first, second), range(second, n))


def _endpoints(g: TemporalGraph, positions) -> set:
    positions = np.asarray(positions, dtype=np.int64)
    return set(np.concatenate([g.src[positions], g.dst[positions]]).tolist())


def remove_new_nodes(g: TemporalGraph, split: SplitRanges) -> Tuple[np.ndarray, np.ndarray]:
    """
    Drop val/test interactions with an endpoint that never appears in training.

    Returns:
        (val positions, test positions); either may be empty (a warning is logged)
    """
    seen = np.zeros(g.num_nodes, dtype=bool)
    train = np.arange(split.train.start, split.train.stop)
    seen[g.src[train]] = True
    seen[g.dst[train]] = True

    filtered = []
    for name, rng in (("validation", split.val), ("test", split.test)):
        positions = np.arange(rng.start, rng.stop)
        keep = positions[seen[g.src[positions]] & seen[g.dst[positions]]]
        dropped = len(positions) - len(keep)
        if dropped:
            logger.info("removed %d %s interactions touching new nodes", dropped, name)
        if len(keep) == 0:
            logger.warning("%s set is empty after removing new nodes", name)
        filtered.append(keep)
    return filtered[0], filtered[1]


def hide_nodes_for_inductive(
    g: TemporalGraph,
    fraction: float = 0.10,
    rng_seed: int = 0,
    split: Optional[SplitRanges] = None,
) -> EdgeSplit:
    """
    Hide a uniform random node subset from training.

    round(fraction * |V|) nodes lose all their training interactions; the
    evaluation sets keep only val/test interactions touching a hidden node.

    Raises:
        GraphError: If fraction is outside (0, 1) or hides no node
    """
    if not 0.0 < fraction < 1.0:
        raise GraphError(f"hidden fraction must be in (0, 1), got {fraction}")
    count = int(np.floor(fraction * g.num_nodes + 0.5))
    if count == 0:
        raise GraphError(f"fraction {fraction} hides no node out of {g.num_nodes}")
    split = split or chronological_split(g)

    rng = make_rng(rng_seed, STREAM_HIDDEN_NODES)
    hidden = np.sort(rng.choice(g.num_nodes, size=count, replace=False))
    is_hidden = np.zeros(g.num_nodes, dtype=bool)
    is_hidden[hidden] = True

    def touches(positions):
        return is_hidden[g.src[positions]] | is_hidden[g.dst[positions]]

    train = np.arange(split.train.start, split.train.stop)
    val = np.arange(split.val.start, split.val.stop)
    test = np.arange(split.test.start, split.test.stop)
    masked_train = train[~touches(train)]
    val_inductive = val[touches(val)]
    test_inductive = test[touches(test)]
    if len(test_inductive) == 0:
        logger.warning("inductive test set is empty: no test interaction touches a hidden node")
    logger.info(
        "hid %d nodes: %d training interactions removed, %d/%d inductive val/test interactions",
        count, len(train) - len(masked_train), len(val_inductive), len(test_inductive),
    )
    return EdgeSplit(
        train=masked_train,
        val=val_inductive,
        test=test_inductive,
        ranges=split,
        hidden_nodes=frozenset(hidden.tolist()),
        train_graph=g.subgraph(masked_train),
    )


def transductive_split(g: TemporalGraph, ratios: Sequence[float] = DEFAULT_RATIOS) -> EdgeSplit:
    """Chronological split with new nodes removed from val/test."""
    ranges = chronological_split(g, ratios)
    val, test = remove_new_nodes(g, ranges)
    return EdgeSplit(
        train=np.arange(ranges.train.start, ranges.train.stop),
        val=val,
        test=test,
        ranges=ranges,
    )
