"""Padded transition contexts for a batch of (node, time) queries."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from graph.sampling import NeighborBatch, sample_batch
from graph.temporal_graph import TemporalGraph
from tensor import get_default_dtype
from .cache import TransitionCache
from .transition import TransitionBundle, build_transition


@dataclass
class ContextBatch:
    """
    Fixed b-slot layout of M transition contexts.

    Neighbor slots (rows) and interaction slots (columns) are both padded to
    b. Padded rows/columns of A_tilde, B and select are zero, so padding
    never mixes into valid slots.
    """

    sample: NeighborBatch
    A_tilde: np.ndarray        # (M, b, b) neighbor x neighbor
    B: np.ndarray              # (M, b, b) neighbor x interaction, incidence
    select: np.ndarray         # (M, b, b) neighbor x interaction, one-hot at last occurrence
    neighbor_valid: np.ndarray  # (M, b) bool
    delta_t: np.ndarray        # (M, b) query time - interaction time, 0 on padding
    edge_feat: np.ndarray      # (M, b, d_e)

    @property
    def size(self) -> int:
        return self.A_tilde.shape[0]

    @property
    def slot_nodes(self) -> np.ndarray:
        return self.sample.neighbors

    @property
    def slot_times(self) -> np.ndarray:
        return self.sample.times


def build_context_batch(
    g: TemporalGraph,
    nodes: np.ndarray,
    times: np.ndarray,
    b: int,
    sampler: str = "temporal",
    rng: Optional[np.random.Generator] = None,
    cache: Optional[TransitionCache] = None,
    normalize: bool = False,
) -> ContextBatch:
    """
    Sample, translate and pad the contexts of M queries.

    Bundles are cached under (graph uid, node, time, b) with the temporal
    sampler only; uniform draws are never reused.
    """
    nodes = np.asarray(nodes, dtype=np.int64)
    times = np.asarray(times, dtype=np.float64)
    sample = sample_batch(g, nodes, times, b, sampler, rng)
    m = len(nodes)
    dtype = get_default_dtype()

    A_tilde = np.zeros((m, b, b), dtype=dtype)
    B = np.zeros((m, b, b), dtype=dtype)
    select = np.zeros((m, b, b), dtype=dtype)
    neighbor_valid = np.zeros((m, b), dtype=bool)
    use_cache = cache is not None and sampler == "temporal"

    for i in range(m):
        c = int(sample.counts[i])
        if c == 0:
            continue
        bundle: Optional[TransitionBundle] = None
        key = (g.uid, int(nodes[i]), float(times[i]), b)
        if use_cache:
            bundle = cache.get(key)
        if bundle is None:
            bundle = build_transition(sample.neighbors[i, :c].tolist())
            if use_cache:
                cache.put(key, bundle)
        n = bundle.n_neighbors
        A_tilde[i, :n, :n] = bundle.A_tilde
        B[i, :n, :c] = bundle.B
        select[i, np.arange(n), bundle.last_occurrence] = 1.0
        neighbor_valid[i, :n] = True

    if normalize:
        row_sums = A_tilde.sum(axis=-1, keepdims=True)
        A_tilde = np.divide(A_tilde, row_sums, out=np.zeros_like(A_tilde), where=row_sums > 0)

    delta_t = np.where(sample.valid, times[:, None] - sample.times, 0.0).astype(dtype)
    if g.edge_dim:
        edge_feat = np.where(
            sample.valid[..., None], g.edge_feat[np.maximum(sample.positions, 0)], 0.0
        ).astype(dtype)
    else:
        edge_feat = np.zeros((m, b, 0), dtype=dtype)

    return ContextBatch(
        sample=sample,
        A_tilde=A_tilde,
        B=B,
        select=select,
        neighbor_valid=neighbor_valid,
        delta_t=delta_t,
        edge_feat=edge_feat,
    )
