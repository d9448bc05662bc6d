"""Sequence translation: interaction sequence -> transition graph."""

from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Tuple, Union

import numpy as np

from graph.temporal_graph import Interaction
from tensor import Tensor, concat
from utils.errors import GraphError


@dataclass(frozen=True)
class TransitionBundle:
    """
    Transition graph of one interaction sequence S_{u,t}.

    neighbor_ids lists distinct neighbors in order of first appearance;
    assignment[j] is the row of interaction j; last_occurrence[r] is the
    index of neighbor r's latest interaction.
    """

    neighbor_ids: Tuple[int, ...]
    A: np.ndarray
    A_tilde: np.ndarray
    B: np.ndarray
    assignment: np.ndarray
    last_occurrence: np.ndarray
    n_interactions: int

    @property
    def n_neighbors(self) -> int:
        return len(self.neighbor_ids)


def neighbor_sequence(interactions: Sequence[Union[Interaction, int]], node: Optional[int] = None) -> list:
    """Neighbor of each interaction as seen from `node` (plain ids pass through)."""
    out = []
    for s in interactions:
        if isinstance(s, Interaction):
            out.append(s.other(node) if node is not None else s.dst)
        else:
            out.append(int(s))
    return out


def build_transition(interactions: Sequence[Union[Interaction, int]], node: Optional[int] = None) -> TransitionBundle:
    """
    Build A, A_tilde and B from an ascending interaction sequence.

    Only chronologically consecutive interactions link their neighbors
    (v_i -> v_{i+1}); repeated neighbors share one row; A_tilde = I + A
    saturated at 1. An empty sequence gives an empty bundle.

    Args:
        interactions: Ascending interactions of `node`, or neighbor ids
        node: The node whose sequence this is (to orient Interaction records)
    """
    sequence = neighbor_sequence(interactions, node)
    rows = {}
    assignment = np.empty(len(sequence), dtype=np.int64)
    for j, v in enumerate(sequence):
        assignment[j] = rows.setdefault(v, len(rows))
    n = len(rows)

    A = np.zeros((n, n), dtype=np.int8)
    if len(sequence) > 1:
        A[assignment[:-1], assignment[1:]] = 1
    A_tilde = np.minimum(A + np.eye(n, dtype=np.int8), 1).astype(np.int8)

    B = np.zeros((n, len(sequence)), dtype=np.int8)
    B[assignment, np.arange(len(sequence))] = 1

    last = np.zeros(n, dtype=np.int64)
    last[assignment] = np.arange(len(sequence))  # later writes win

    for array in (A, A_tilde, B, assignment, last):
        array.flags.writeable = False
    return TransitionBundle(
        neighbor_ids=tuple(rows),
        A=A,
        A_tilde=A_tilde,
        B=B,
        assignment=assignment,
        last_occurrence=last,
        n_interactions=len(sequence),
    )


def stack_edge_features(
    interactions: Sequence[Interaction],
    query_t: float,
    time_encoder: Callable[[np.ndarray], Tensor],
) -> Tensor:
    """
    H_S: one row concat(e_i, Phi(query_t - t_i)) per interaction.

    Featureless interactions contribute pure time encodings.

    Raises:
        GraphError: If an interaction happens after query_t
    """
    times = np.array([s.t for s in interactions], dtype=np.float64)
    if np.any(times > query_t):
        raise GraphError(f"interaction at t={times.max()} is after query time {query_t}")
    phi = time_encoder(query_t - times)
    feats = [s.edge_feat for s in interactions]
    if not feats or feats[0] is None:
        return phi
    return concat([Tensor(np.stack(feats)), phi], axis=-1)
