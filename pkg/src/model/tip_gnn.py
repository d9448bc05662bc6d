"""The TIP-GNN model: recursive temporal embedding and link probability."""

from dataclasses import replace
from typing import List, Optional, Tuple

import numpy as np

from graph.temporal_graph import SECONDS_PER_DAY, TemporalGraph
from tensor import (
    Linear,
    Module,
    Tensor,
    concat,
    dropout,
    glorot_uniform,
    matmul,
    mul,
    sigmoid,
    take_rows,
)
from translation import ContextBatch, TransitionCache, build_context_batch
from utils.errors import GraphError
from utils.logger import get_logger
from utils.rng import make_rng, STREAM_DROPOUT, STREAM_INIT, STREAM_SAMPLER
from .config import TipGnnConfig
from .layers import AttentionFusion, FeatureInitializer, LinkPredictor, TransitionPooling, TransitionPropagation
from .time_encoding import TimeEncoder

logger = get_logger(__name__)


class TipGnnLayer(Module):
    """Feature initialization, propagation, pooling and fusion for one layer."""

    def __init__(self, config: TipGnnConfig, rng: np.random.Generator):
        self.init = FeatureInitializer(config.d, config.d_e + config.d_t, rng)
        self.propagation = TransitionPropagation(config.d, config.steps, config.mlp_depth, rng)
        self.pooling = TransitionPooling(config.d, config.heads, rng)
        self.fusion = AttentionFusion(config.d, config.steps, rng)

    def __call__(
        self,
        ctx: ContextBatch,
        h_root: Tensor,
        h_slots: Tensor,
        time_encoder: TimeEncoder,
        config: TipGnnConfig,
        rng: np.random.Generator,
    ) -> Tuple[Tensor, Tensor]:
        """
        Args:
            ctx: Padded contexts of M queries
            h_root: (M, d) previous-layer embedding of each query node
            h_slots: (M, b, d) previous-layer embedding of each sampled interaction's
                neighbor at that interaction's time

        Returns:
            (embeddings (M, d), fusion weights (M, K+1))
        """
        H_S = time_encoder(ctx.delta_t)
        if config.d_e:
            H_S = concat([Tensor(ctx.edge_feat), H_S], axis=-1)
        H_N = matmul(Tensor(ctx.select), h_slots)
        Z0 = dropout(self.init(ctx.B, H_S, H_N), config.dropout, self.training, rng)
        steps = self.propagation(Z0, ctx.A_tilde, config.alpha)
        pooled = [self.pooling(h_root, Z, ctx.neighbor_valid) for Z in steps]
        fused, weights = self.fusion(pooled)
        return dropout(fused, config.dropout, self.training, rng), weights


class TipGnn(Module):
    """
    Transition propagation graph neural network.

    Layer-0 embeddings are node features (zeros, a fixed table, or a learned
    table); layer l embeds a (node, time) pair from its sampled context and
    the layer l-1 embeddings of that context, recursively.
    """

    def __init__(
        self,
        config: TipGnnConfig,
        num_nodes: int,
        node_dim: int = 0,
        timespan: float = SECONDS_PER_DAY,
        seed: int = 0,
        cache: Optional[TransitionCache] = None,
    ):
        self.config = config.validate()
        self.num_nodes = num_nodes
        self.node_dim = node_dim
        self.timespan = timespan
        self.seed = seed
        rng = make_rng(seed, STREAM_INIT)

        self.time_encoder = TimeEncoder(config.d_t, timespan)
        self.node_table: Optional[Tensor] = None
        self.feature_proj: Optional[Linear] = None
        if config.node_feature_mode == "learned":
            self.node_table = glorot_uniform((num_nodes, config.d), rng)
        elif config.node_feature_mode == "table" and node_dim != config.d:
            self.feature_proj = Linear(node_dim, config.d, rng, bias=False)
        self.layers = [TipGnnLayer(config, rng) for _ in range(config.layers)]
        self.head = LinkPredictor(config.d, rng)

        self.cache = cache if cache is not None else TransitionCache()
        self.dropout_rng = make_rng(seed, STREAM_DROPOUT)
        self.sampler_rng = make_rng(seed, STREAM_SAMPLER)

    @classmethod
    def for_graph(cls, config: TipGnnConfig, g: TemporalGraph, seed: int = 0, **kwargs) -> "TipGnn":
        """Build a model sized for `g` (edge/node feature dims, timespan)."""
        config = replace(config, d_e=g.edge_dim)
        return cls(config, g.num_nodes, node_dim=g.node_dim, timespan=max(g.timespan, 1.0), seed=seed, **kwargs)

    # ------------------------------------------------------------------
    # embeddings

    def node_features(self, g: TemporalGraph, nodes: np.ndarray) -> Tensor:
        """Layer-0 rows; node -1 (padding) maps to a zero row."""
        nodes = np.asarray(nodes, dtype=np.int64)
        d = self.config.d
        mode = self.config.node_feature_mode
        known = (nodes >= 0) & (nodes < self.num_nodes)
        if mode == "table":
            if g.node_feat is None:
                raise GraphError("node_feature_mode=table needs a node feature table")
            unknown = nodes[(nodes >= self.num_nodes) | (nodes < -1)]
            if len(unknown):
                raise GraphError(f"nodes {unknown[:5].tolist()} have no feature row")
            rows = np.where(known[:, None], g.node_feat[np.where(known, nodes, 0)], 0.0)
            features = Tensor(rows)
            return self.feature_proj(features) if self.feature_proj is not None else features
        if mode == "learned":
            rows = take_rows(self.node_table, np.where(known, nodes, 0))
            return mul(rows, Tensor(known[:, None].astype(rows.data.dtype)))
        return Tensor(np.zeros((len(nodes), d)))

    def _embed_level(self, g: TemporalGraph, nodes: np.ndarray, times: np.ndarray, level: int):
        if level == 0:
            return self.node_features(g, nodes), None
        cfg = self.config
        b = cfg.neighbors
        ctx = build_context_batch(
            g, nodes, times, b,
            sampler=cfg.sampler, rng=self.sampler_rng, cache=self.cache,
            normalize=cfg.normalize_transitions,
        )
        m = len(nodes)
        lower_nodes = np.concatenate([nodes, ctx.slot_nodes.reshape(-1)])
        lower_times = np.concatenate([times, ctx.slot_times.reshape(-1)])
        lower, _ = self._embed_level(g, lower_nodes, lower_times, level - 1)
        h_root = lower[:m]
        h_slots = lower[m:].reshape(m, b, cfg.d)
        return self.layers[level - 1](ctx, h_root, h_slots, self.time_encoder, cfg, self.dropout_rng)

    def embed_batch(self, g: TemporalGraph, nodes, times) -> Tuple[Tensor, np.ndarray]:
        """
        Top-layer embeddings of M (node, time) queries.

        Returns:
            (embeddings (M, d), last-layer fusion weights (M, K+1))
        """
        nodes = np.asarray(nodes, dtype=np.int64)
        times = np.asarray(times, dtype=np.float64)
        h, weights = self._embed_level(g, nodes, times, self.config.layers)
        return h, weights.data

    def embed(self, g: TemporalGraph, u: int, t: float) -> np.ndarray:
        """Embedding h_{u,t}^L of a single query as a d-vector."""
        h, _ = self.embed_batch(g, [u], [t])
        return h.data[0].copy()

    # ------------------------------------------------------------------
    # link prediction

    def link_logits(self, g: TemporalGraph, src, dst, times) -> Tensor:
        """Pre-sigmoid scores of (src[i], dst[i], times[i]); one embedding pass."""
        src = np.asarray(src, dtype=np.int64)
        times = np.asarray(times, dtype=np.float64)
        m = len(src)
        h, _ = self.embed_batch(g, np.concatenate([src, dst]), np.concatenate([times, times]))
        return self.head(h[:m], h[m:])

    def predict_link(self, g: TemporalGraph, u: int, v: int, t: float) -> float:
        """Probability that u and v interact at t, in (0, 1)."""
        return float(sigmoid(self.link_logits(g, [u], [v], [t])).data[0])

    def score_links(self, g: TemporalGraph, src, dst, times, chunk_size: int = 200) -> np.ndarray:
        """Probabilities for many pairs, evaluated in chunks to bound memory."""
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        times = np.asarray(times, dtype=np.float64)
        out: List[np.ndarray] = []
        for start in range(0, len(src), chunk_size):
            sl = slice(start, start + chunk_size)
            out.append(sigmoid(self.link_logits(g, src[sl], dst[sl], times[sl])).data)
        return np.concatenate(out) if out else np.empty(0)

    def attention_weights(self, g: TemporalGraph, nodes, times, chunk_size: int = 200) -> np.ndarray:
        """Last-layer fusion weights (M, K+1) for many queries."""
        nodes = np.asarray(nodes, dtype=np.int64)
        times = np.asarray(times, dtype=np.float64)
        out = []
        for start in range(0, len(nodes), chunk_size):
            sl = slice(start, start + chunk_size)
            out.append(self.embed_batch(g, nodes[sl], times[sl])[1])
        return np.concatenate(out) if out else np.empty((0, self.config.steps + 1))
