"""Leakage-free neighbor sampling and negative sampling."""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from utils.errors import GraphError, SamplingError
from .temporal_graph import Interaction, TemporalGraph

SAMPLERS = ("temporal", "uniform")
NEGATIVE_MODES = ("train", "eval")


def _history_before(g: TemporalGraph, u: int, t: float) -> Tuple[int, int]:
    """CSR bounds [lo, k) of u's interactions with timestamp strictly < t."""
    if not g.has_node(u):
        return 0, 0
    lo, hi = int(g.node_ptr[u]), int(g.node_ptr[u + 1])
    k = lo + int(np.searchsorted(g.flat_ts[lo:hi], t, side="left"))
    return lo, k


def _pick(lo: int, k: int, b: int, sampler: str, rng: Optional[np.random.Generator]) -> np.ndarray:
    """Flat CSR indices of the chosen interactions, ascending."""
    if sampler == "temporal":
        return np.arange(max(lo, k - b), k)
    if k - lo <= b:
        return np.arange(lo, k)
    rng = rng if rng is not None else np.random.default_rng()
    return lo + np.sort(rng.choice(k - lo, size=b, replace=False))


def sample_recent(
    g: TemporalGraph,
    u: int,
    t: float,
    b: int,
    sampler: str = "temporal",
    rng: Optional[np.random.Generator] = None,
) -> List[Interaction]:
    """
    Up to b interactions of u with timestamp strictly before t, ascending.

    The temporal sampler keeps the b latest; the uniform one draws b of the
    eligible interactions without replacement. Unknown nodes yield [].
    """
    if b < 1:
        raise GraphError(f"sample size b must be >= 1, got {b}")
    if sampler not in SAMPLERS:
        raise GraphError(f"unknown sampler {sampler!r}")
    lo, k = _history_before(g, u, t)
    return [g.interaction(int(p)) for p in g.flat_pos[_pick(lo, k, b, sampler, rng)]]


@dataclass
class SampledContext:
    """
    Recursive sample around a (node, time) root.

    layers[0] holds the root's own list; layers[d] holds one list per
    interaction of layers[d-1], sampled at that interaction's time.
    padding[d][i, j] is True where slot j of list i is absent.
    """

    root: Tuple[int, float]
    b: int
    layers: List[List[List[Interaction]]] = field(default_factory=list)
    padding: List[np.ndarray] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return len(self.layers)

    def size(self) -> int:
        """Root plus every sampled interaction (bounded by 1 + b + ... + b^L)."""
        return 1 + sum(len(lst) for layer in self.layers for lst in layer)


def recursive_sample(
    g: TemporalGraph,
    u: int,
    t: float,
    b: int,
    L: int,
    sampler: str = "temporal",
    rng: Optional[np.random.Generator] = None,
) -> SampledContext:
    """Sample L levels: each interaction (v_i, t_i) spawns sample_recent(v_i, t_i, b)."""
    if L < 1:
        raise GraphError(f"number of layers must be >= 1, got {L}")
    ctx = SampledContext(root=(u, t), b=b)
    queries = [(u, t)]
    for _ in range(L):
        lists = [sample_recent(g, node, when, b, sampler, rng) for node, when in queries]
        padding = np.ones((len(lists), b), dtype=bool)
        for i, lst in enumerate(lists):
            padding[i, :len(lst)] = False
        ctx.layers.append(lists)
        ctx.padding.append(padding)
        queries = [(s.other(node), s.t) for (node, _), lst in zip(queries, lists) for s in lst]
    return ctx


@dataclass
class NeighborBatch:
    """
    Padded sampling result for M queries with b slots each.

    Valid slots are left-aligned in ascending time; padded slots carry
    neighbor -1, position -1 and the query time.
    """

    neighbors: np.ndarray   # (M, b) int
    times: np.ndarray       # (M, b) float
    positions: np.ndarray   # (M, b) int, positions in the sampled graph
    valid: np.ndarray       # (M, b) bool
    counts: np.ndarray      # (M,) int


def sample_batch(
    g: TemporalGraph,
    nodes: np.ndarray,
    times: np.ndarray,
    b: int,
    sampler: str = "temporal",
    rng: Optional[np.random.Generator] = None,
) -> NeighborBatch:
    """Array form of sample_recent for many queries; node -1 is an empty query."""
    if b < 1:
        raise GraphError(f"sample size b must be >= 1, got {b}")
    if sampler not in SAMPLERS:
        raise GraphError(f"unknown sampler {sampler!r}")
    nodes = np.asarray(nodes, dtype=np.int64)
    times = np.asarray(times, dtype=np.float64)
    m = len(nodes)
    neighbors = np.full((m, b), -1, dtype=np.int64)
    positions = np.full((m, b), -1, dtype=np.int64)
    slot_times = np.repeat(times[:, None], b, axis=1)
    counts = np.zeros(m, dtype=np.int64)
    for i in range(m):
        lo, k = _history_before(g, int(nodes[i]), float(times[i]))
        if k == lo:
            continue
        chosen = _pick(lo, k, b, sampler, rng)
        c = len(chosen)
        counts[i] = c
        neighbors[i, :c] = g.flat_nbr[chosen]
        positions[i, :c] = g.flat_pos[chosen]
        slot_times[i, :c] = g.flat_ts[chosen]
    valid = np.arange(b)[None, :] < counts[:, None]
    return NeighborBatch(neighbors, slot_times, positions, valid, counts)


def negative_sample(
    g: TemporalGraph,
    u: int,
    t: float,
    mode: str,
    rng: np.random.Generator,
) -> int:
    """
    Draw a corrupted destination for source u.

    train: uniform over all nodes. eval: uniform over nodes that never
    interacted with u anywhere in the dataset (u itself excluded).

    Raises:
        SamplingError: eval mode when u is adjacent to every other node
    """
    if mode not in NEGATIVE_MODES:
        raise GraphError(f"negative sampling mode must be one of {NEGATIVE_MODES}, got {mode!r}")
    if mode == "train":
        return int(rng.integers(g.num_nodes))
    count = g.non_neighbor_count(u)
    if count == 0:
        raise SamplingError(
            f"node {g.node_names[u]!r} interacted with all {g.num_nodes - 1} other nodes; "
            f"no evaluation negative exists (query time {t})"
        )
    return g.nth_non_neighbor(u, int(rng.integers(count)))


def negative_sample_batch(g: TemporalGraph, size: int, rng: np.random.Generator) -> np.ndarray:
    """`size` independent train-mode negatives (uniform over all nodes)."""
    return rng.integers(g.num_nodes, size=size)
