"""Tests for sequence translation, the bundle cache and padded context batches."""

import itertools
import threading

import numpy as np
import pytest

from graph import build_graph, sample_recent
from model.time_encoding import TimeEncoder
from translation import TransitionCache, build_context_batch, build_transition, stack_edge_features
from utils.errors import GraphError


def _scan(sequence):
    """Direct pairwise scan: rows by first appearance, one link per adjacent pair."""
    ids = []
    for v in sequence:
        if v not in ids:
            ids.append(v)
    n = len(ids)
    A = np.zeros((n, n), dtype=int)
    for i in range(len(sequence) - 1):
        for j in range(len(sequence)):
            if j == i + 1:
                A[ids.index(sequence[i]), ids.index(sequence[j])] = 1
    A_tilde = np.zeros((n, n), dtype=int)
    for r in range(n):
        for c in range(n):
            A_tilde[r, c] = 1 if r == c or A[r, c] else 0
    B = np.zeros((n, len(sequence)), dtype=int)
    for j, v in enumerate(sequence):
        B[ids.index(v), j] = 1
    return ids, A, A_tilde, B


def _assert_matches_scan(sequence):
    bundle = build_transition(list(sequence))
    ids, A, A_tilde, B = _scan(list(sequence))
    assert list(bundle.neighbor_ids) == ids
    np.testing.assert_array_equal(bundle.A, A)
    np.testing.assert_array_equal(bundle.A_tilde, A_tilde)
    np.testing.assert_array_equal(bundle.B, B)
    assert bundle.n_interactions == len(sequence)


def test_single_interaction():
    """[v1] gives A=[0], A_tilde=[1], B=[[1]]."""
    bundle = build_transition([7])
    assert bundle.neighbor_ids == (7,)
    np.testing.assert_array_equal(bundle.A, [[0]])
    np.testing.assert_array_equal(bundle.A_tilde, [[1]])
    np.testing.assert_array_equal(bundle.B, [[1]])


def test_revisited_neighbor():
    """[v1, v2, v1, v3] links (v1,v2), (v2,v1), (v1,v3) and nothing else."""
    bundle = build_transition([1, 2, 1, 3])
    assert bundle.neighbor_ids == (1, 2, 3)
    expected = np.zeros((3, 3), dtype=int)
    expected[0, 1] = expected[1, 0] = expected[0, 2] = 1
    np.testing.assert_array_equal(bundle.A, expected)
    assert bundle.B.shape == (3, 4)
    assert bundle.B.argmax(axis=0).tolist() == [0, 1, 0, 2]
    assert bundle.last_occurrence.tolist() == [2, 1, 3]


def test_self_transition_saturates():
    """[v1, v1] gives A=[1] and A_tilde=[1], not 2."""
    bundle = build_transition([4, 4])
    np.testing.assert_array_equal(bundle.A, [[1]])
    np.testing.assert_array_equal(bundle.A_tilde, [[1]])


def test_empty_sequence():
    """An empty list gives an empty bundle."""
    bundle = build_transition([])
    assert bundle.n_neighbors == 0
    assert bundle.A.shape == (0, 0)
    assert bundle.B.shape == (0, 0)


def test_exhaustive_equivalence_with_pair_scan():
    """Every sequence of length <= 6 over <= 4 neighbors matches the pair scan."""
    count = 0
    for length in range(1, 7):
        for sequence in itertools.product(range(4), repeat=length):
            _assert_matches_scan(sequence)
            count += 1
    assert count == sum(4 ** k for k in range(1, 7))


def test_random_long_sequences_match_pair_scan():
    """Ten thousand random longer sequences match the pair scan."""
    rng = np.random.default_rng(0)
    for _ in range(10_000):
        length = int(rng.integers(7, 16))
        _assert_matches_scan(rng.integers(0, 6, size=length).tolist())


def test_incidence_sums():
    """B 1 is the multiplicity vector and 1^T B is all ones."""
    rng = np.random.default_rng(1)
    for _ in range(200):
        sequence = rng.integers(0, 5, size=int(rng.integers(1, 12))).tolist()
        bundle = build_transition(sequence)
        multiplicity = [sequence.count(v) for v in bundle.neighbor_ids]
        assert bundle.B.sum(axis=1).tolist() == multiplicity
        assert bundle.B.sum(axis=0).tolist() == [1] * len(sequence)
        assert np.all(np.diag(bundle.A_tilde) == 1)


def test_transition_depends_only_on_order():
    """Different timestamps with the same order give the same matrices."""
    first = build_graph([("u", "a", 1.0), ("u", "b", 2.0), ("u", "a", 3.0)])
    second = build_graph([("u", "a", 10.0), ("u", "b", 500.0), ("u", "a", 501.0)])
    u1, u2 = first.node_id("u"), second.node_id("u")
    b1 = build_transition(sample_recent(first, u1, 1e6, 10), node=u1)
    b2 = build_transition(sample_recent(second, u2, 1e6, 10), node=u2)
    np.testing.assert_array_equal(b1.A, b2.A)
    np.testing.assert_array_equal(b1.B, b2.B)


def test_stack_edge_features_featureless():
    """Without edge features H_S is pure time encodings."""
    g = build_graph([("u", "a", 1.0), ("u", "b", 2.0)])
    encoder = TimeEncoder(8, timespan=10.0)
    h = stack_edge_features(sample_recent(g, 0, 3.0, 5), 3.0, encoder)
    assert h.shape == (2, 8)


def test_stack_edge_features_zero_gap_is_all_ones():
    """An interaction at the query time encodes as cos(0) = 1."""
    g = build_graph([("u", "a", 1.0, [0.5, -0.5])])
    encoder = TimeEncoder(4, timespan=10.0)
    h = stack_edge_features(g.interactions, 1.0, encoder)
    np.testing.assert_array_equal(h.data, [[0.5, -0.5, 1.0, 1.0, 1.0, 1.0]])


def test_stack_edge_features_width():
    """d_e = 172 and d_t = 128 give rows of width 300."""
    g = build_graph([("u", "a", 1.0, list(np.ones(172))), ("u", "b", 2.0, list(np.zeros(172)))])
    h = stack_edge_features(g.interactions, 5.0, TimeEncoder(128, timespan=10.0))
    assert h.shape == (2, 300)


def test_stack_edge_features_rejects_future_interaction():
    """An interaction after the query time is a leak."""
    g = build_graph([("u", "a", 5.0)])
    with pytest.raises(GraphError):
        stack_edge_features(g.interactions, 4.0, TimeEncoder(4))


def test_cache_lru_eviction_and_counters():
    """The least recently used entry is evicted first; hits and misses are counted."""
    cache = TransitionCache(capacity=2)
    cache.put("a", 1)
    cache.put("b", 2)
    assert cache.get("a") == 1
    cache.put("c", 3)
    assert "b" not in cache
    assert "a" in cache and "c" in cache
    assert cache.get("b") is None
    assert (cache.hits, cache.misses) == (1, 1)
    cache.clear()
    assert len(cache) == 0


def test_cache_concurrent_puts():
    """Concurrent insertion never exceeds the capacity."""
    cache = TransitionCache(capacity=50)

    def worker(offset):
        for i in range(500):
            cache.put((offset, i), i)
            cache.get((offset, i // 2))

    threads = [threading.Thread(target=worker, args=(k,)) for k in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(cache) == 50


def test_context_batch_layout():
    """Valid slots carry the bundle; padded rows and columns stay zero."""
    g = build_graph([("u", "a", 1.0), ("u", "b", 2.0), ("u", "a", 3.0), ("v", "a", 0.5)])
    u = g.node_id("u")
    batch = build_context_batch(g, np.array([u, -1]), np.array([10.0, 10.0]), b=4)
    assert batch.size == 2
    np.testing.assert_array_equal(batch.A_tilde[0, :2, :2], [[1, 1], [1, 1]])
    assert batch.A_tilde[0, 2:].sum() == 0 and batch.A_tilde[0, :, 2:].sum() == 0
    np.testing.assert_array_equal(batch.B[0, :2, :3], [[1, 0, 1], [0, 1, 0]])
    # a's latest interaction is the third slot
    np.testing.assert_array_equal(batch.select[0, 0], [0, 0, 1, 0])
    np.testing.assert_array_equal(batch.select[0, 1], [0, 1, 0, 0])
    assert batch.neighbor_valid[0].tolist() == [True, True, False, False]
    np.testing.assert_array_equal(batch.delta_t[0], [9.0, 8.0, 7.0, 0.0])
    assert not batch.neighbor_valid[1].any()
    assert batch.A_tilde[1].sum() == 0
    assert batch.edge_feat.shape == (2, 4, 0)


def test_context_batch_row_normalization():
    """Normalized A_tilde rows sum to one over valid neighbors."""
    g = build_graph([("u", "a", 1.0), ("u", "b", 2.0), ("u", "c", 3.0)])
    batch = build_context_batch(g, np.array([g.node_id("u")]), np.array([5.0]), b=3, normalize=True)
    np.testing.assert_allclose(batch.A_tilde[0].sum(axis=-1), [1.0, 1.0, 1.0])
    np.testing.assert_allclose(batch.A_tilde[0, 0], [0.5, 0.5, 0.0])


def test_context_batch_uses_cache_for_temporal_sampler_only():
    """Repeated temporal queries hit the cache; uniform draws bypass it."""
    g = build_graph([("u", "a", 1.0), ("u", "b", 2.0)])
    cache = TransitionCache(capacity=10)
    nodes, times = np.array([0]), np.array([5.0])
    build_context_batch(g, nodes, times, b=2, cache=cache)
    build_context_batch(g, nodes, times, b=2, cache=cache)
    assert cache.hits == 1
    assert len(cache) == 1
    build_context_batch(g, nodes, times, b=2, sampler="uniform", rng=np.random.default_rng(0), cache=cache)
    assert cache.hits == 1
