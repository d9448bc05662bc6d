"""Immutable store of timestamped interactions."""

import uuid
from dataclasses import dataclass
from typing import Dict, Hashable, Iterable, List, Mapping, Optional, Sequence

import numpy as np

from utils.errors import DatasetError, GraphError
from utils.logger import get_logger

logger = get_logger(__name__)

SECONDS_PER_DAY = 86400.0


@dataclass(frozen=True)
class EdgeRecord:
    """One raw interaction as read from a dataset file."""

    src: Hashable
    dst: Hashable
    t: float
    feat: Optional[Sequence[float]] = None
    line: Optional[int] = None


@dataclass(frozen=True)
class Interaction:
    """A timestamped edge s_i = (u, v_i, t_i) with its chronological position."""

    src: int
    dst: int
    t: float
    edge_index: int
    edge_feat: Optional[np.ndarray] = None

    def other(self, node: int) -> int:
        """The endpoint that is not `node` (self-loops return `node`)."""
        return self.dst if self.src == node else self.src


@dataclass(frozen=True)
class GraphStatistics:
    num_nodes: int
    num_edges: int
    density: float
    repetition: float
    timespan_days: float


def _readonly(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


class TemporalGraph:
    """
    Timestamp-sorted multigraph with per-node chronological indices.

    Interactions live in parallel arrays sorted by (t, input order). Every node
    keeps a CSR slice of (time, position, neighbor) triples in the same order,
    so "latest b before t" is one binary search. Instances are never mutated
    after construction and can be shared between sampling threads.
    """

    def __init__(
        self,
        src: np.ndarray,
        dst: np.ndarray,
        ts: np.ndarray,
        edge_feat: np.ndarray,
        edge_ids: np.ndarray,
        input_order: np.ndarray,
        node_names: List[Hashable],
        node_feat: Optional[np.ndarray] = None,
    ):
        self.uid = uuid.uuid4().hex
        self.src = _readonly(np.asarray(src, dtype=np.int64))
        self.dst = _readonly(np.asarray(dst, dtype=np.int64))
        self.ts = _readonly(np.asarray(ts, dtype=np.float64))
        self.edge_feat = _readonly(np.asarray(edge_feat, dtype=np.float64))
        self.edge_ids = _readonly(np.asarray(edge_ids, dtype=np.int64))
        self.input_order = _readonly(np.asarray(input_order, dtype=np.int64))
        self.node_names = list(node_names)
        self.node_index: Dict[Hashable, int] = {name: i for i, name in enumerate(self.node_names)}
        self.node_feat = None if node_feat is None else _readonly(np.asarray(node_feat, dtype=np.float64))
        self._build_node_index()
        self._build_exclusion_index()

    def _build_node_index(self) -> None:
        n_edges = len(self.src)
        positions = np.arange(n_edges, dtype=np.int64)
        not_loop = self.src != self.dst
        owner = np.concatenate([self.src, self.dst[not_loop]])
        pos = np.concatenate([positions, positions[not_loop]])
        nbr = np.concatenate([self.dst, self.src[not_loop]])
        order = np.lexsort((pos, owner))
        counts = np.bincount(owner, minlength=self.num_nodes)
        self.node_ptr = _readonly(np.concatenate([[0], np.cumsum(counts)]).astype(np.int64))
        self.flat_pos = _readonly(pos[order])
        self.flat_nbr = _readonly(nbr[order])
        self.flat_ts = _readonly(self.ts[self.flat_pos])

    def _build_exclusion_index(self) -> None:
        """CSR of each node's distinct neighbors plus the node itself, sorted."""
        n = self.num_nodes
        if n == 0:
            self.excl_ptr = _readonly(np.zeros(1, dtype=np.int64))
            self.excl_nodes = _readonly(np.empty(0, dtype=np.int64))
            return
        nodes = np.arange(n, dtype=np.int64)
        owner = np.concatenate([self.src, self.dst, nodes])
        other = np.concatenate([self.dst, self.src, nodes])
        keys = np.unique(owner * n + other)
        counts = np.bincount(keys // n, minlength=n)
        self.excl_ptr = _readonly(np.concatenate([[0], np.cumsum(counts)]).astype(np.int64))
        self.excl_nodes = _readonly(keys % n)

    # ------------------------------------------------------------------
    # sizes

    @property
    def num_nodes(self) -> int:
        return len(self.node_names)

    @property
    def num_edges(self) -> int:
        return len(self.src)

    @property
    def edge_dim(self) -> int:
        return self.edge_feat.shape[1]

    @property
    def node_dim(self) -> int:
        return 0 if self.node_feat is None else self.node_feat.shape[1]

    @property
    def timespan(self) -> float:
        return float(self.ts[-1] - self.ts[0]) if self.num_edges else 0.0

    def __len__(self) -> int:
        return self.num_edges

    def __repr__(self) -> str:
        return f"TemporalGraph(|V|={self.num_nodes}, |E|={self.num_edges}, d_e={self.edge_dim})"

    # ------------------------------------------------------------------
    # access

    def interaction(self, position: int) -> Interaction:
        feat = self.edge_feat[position] if self.edge_dim else None
        return Interaction(
            src=int(self.src[position]),
            dst=int(self.dst[position]),
            t=float(self.ts[position]),
            edge_index=int(self.edge_ids[position]),
            edge_feat=feat,
        )

    @property
    def interactions(self) -> List[Interaction]:
        return [self.interaction(i) for i in range(self.num_edges)]

    def node_id(self, name: Hashable) -> int:
        try:
            return self.node_index[name]
        except KeyError:
            raise GraphError(f"unknown node {name!r}") from None

    def has_node(self, node: int) -> bool:
        return 0 <= node < self.num_nodes

    def history(self, node: int):
        """(times, positions, neighbors) of every interaction of `node`, ascending."""
        if not self.has_node(node):
            empty = np.empty(0, dtype=np.int64)
            return np.empty(0), empty, empty
        lo, hi = self.node_ptr[node], self.node_ptr[node + 1]
        return self.flat_ts[lo:hi], self.flat_pos[lo:hi], self.flat_nbr[lo:hi]

    def neighbors(self, node: int) -> np.ndarray:
        """Distinct nodes that ever interacted with `node`."""
        return np.unique(self.history(node)[2])

    def _excluded(self, node: int) -> np.ndarray:
        return self.excl_nodes[self.excl_ptr[node]:self.excl_ptr[node + 1]]

    def non_neighbors(self, node: int) -> np.ndarray:
        """Nodes that never interacted with `node` (excluding `node` itself), ascending."""
        if not self.has_node(node):
            raise GraphError(f"unknown node id {node}")
        return np.setdiff1d(np.arange(self.num_nodes), self._excluded(node), assume_unique=True)

    def non_neighbor_count(self, node: int) -> int:
        if not self.has_node(node):
            raise GraphError(f"unknown node id {node}")
        return self.num_nodes - int(self.excl_ptr[node + 1] - self.excl_ptr[node])

    def nth_non_neighbor(self, node: int, k: int) -> int:
        """
        The k-th smallest non-neighbor of `node`, without materializing the set.

        Raises:
            GraphError: If k is outside [0, non_neighbor_count(node))
        """
        if not 0 <= k < self.non_neighbor_count(node):
            raise GraphError(f"node {node} has no non-neighbor number {k}")
        excluded = self._excluded(node)
        # excluded[i] - i counts the non-neighbors below excluded[i]
        skipped = int(np.searchsorted(excluded - np.arange(len(excluded)), k, side="right"))
        return k + skipped

    def subgraph(self, positions: Iterable[int]) -> "TemporalGraph":
        """Graph over a subset of interactions; node table and edge ids are kept."""
        positions = np.unique(np.asarray(list(positions), dtype=np.int64))
        return TemporalGraph(
            src=self.src[positions],
            dst=self.dst[positions],
            ts=self.ts[positions],
            edge_feat=self.edge_feat[positions],
            edge_ids=self.edge_ids[positions],
            input_order=self.input_order[positions],
            node_names=self.node_names,
            node_feat=self.node_feat,
        )

    # ------------------------------------------------------------------
    # statistics

    def repetition_ratio(self) -> float:
        """
        Fraction of interactions whose source repeats its previous neighbor.

        An interaction counts when the source node's immediately preceding
        interaction was with the same destination.
        """
        if self.num_edges == 0:
            return 0.0
        last_neighbor = np.full(self.num_nodes, -1, dtype=np.int64)
        repeats = 0
        for u, v in zip(self.src.tolist(), self.dst.tolist()):
            if last_neighbor[u] == v:
                repeats += 1
            last_neighbor[u] = v
            last_neighbor[v] = u
        return repeats / self.num_edges

    def statistics(self) -> GraphStatistics:
        n = self.num_nodes
        pairs = n * (n - 1) / 2.0
        return GraphStatistics(
            num_nodes=n,
            num_edges=self.num_edges,
            density=self.num_edges / pairs if pairs else 0.0,
            repetition=self.repetition_ratio(),
            timespan_days=self.timespan / SECONDS_PER_DAY,
        )


def build_graph(
    edges: Sequence[EdgeRecord],
    node_feats: Optional[Mapping[Hashable, Sequence[float]]] = None,
    edge_dim: Optional[int] = None,
) -> TemporalGraph:
    """
    Validate raw records and build a sorted TemporalGraph.

    Node ids are mapped to 0..|V|-1 in order of first appearance (edges first,
    then feature-only nodes). Duplicate (src, dst, t) records stay distinct
    interactions.

    Args:
        edges: Raw records (EdgeRecord or (src, dst, t[, feat]) tuples)
        node_feats: Optional table node -> feature vector
        edge_dim: Declared edge-feature dimension; inferred from the first
            record when omitted

    Raises:
        DatasetError: Negative/non-finite timestamp or inconsistent dimensions
    """
    records = [e if isinstance(e, EdgeRecord) else EdgeRecord(*e) for e in edges]
    if edge_dim is None:
        edge_dim = len(records[0].feat) if records and records[0].feat is not None else 0

    node_names: List[Hashable] = []
    node_index: Dict[Hashable, int] = {}

    def intern(name: Hashable) -> int:
        if name not in node_index:
            node_index[name] = len(node_names)
            node_names.append(name)
        return node_index[name]

    n = len(records)
    src = np.empty(n, dtype=np.int64)
    dst = np.empty(n, dtype=np.int64)
    ts = np.empty(n, dtype=np.float64)
    feats = np.zeros((n, edge_dim), dtype=np.float64)
    for i, rec in enumerate(records):
        t = float(rec.t)
        if not np.isfinite(t) or t < 0:
            raise DatasetError(f"timestamp must be finite and non-negative, got {rec.t} in {rec}", line=rec.line, record=rec)
        feat_len = 0 if rec.feat is None else len(rec.feat)
        if feat_len != edge_dim:
            raise DatasetError(
                f"edge feature dimension {feat_len} does not match graph dimension {edge_dim} in {rec}",
                line=rec.line, record=rec,
            )
        src[i] = intern(rec.src)
        dst[i] = intern(rec.dst)
        ts[i] = t
        if edge_dim:
            feats[i] = np.asarray(rec.feat, dtype=np.float64)

    node_feat = None
    if node_feats:
        for name in node_feats:
            intern(name)
        dims = {len(v) for v in node_feats.values()}
        if len(dims) != 1:
            raise DatasetError(f"node features have inconsistent dimensions {sorted(dims)}")
        node_feat = np.zeros((len(node_names), dims.pop()), dtype=np.float64)
        for name, vector in node_feats.items():
            node_feat[node_index[name]] = np.asarray(vector, dtype=np.float64)

    order = np.lexsort((np.arange(n), ts))
    graph = TemporalGraph(
        src=src[order],
        dst=dst[order],
        ts=ts[order],
        edge_feat=feats[order],
        edge_ids=np.arange(n, dtype=np.int64),
        input_order=order,
        node_names=node_names,
        node_feat=node_feat,
    )
    logger.debug("built %r", graph)
    return graph
