"""Tests for the fusion-weight export."""

import csv
import tempfile
from pathlib import Path

import numpy as np

from experiments.attention import export_attention
from graph import build_graph
from model import TipGnn, TipGnnConfig


def _graph():
    rng = np.random.default_rng(0)
    return build_graph([(f"n{int(rng.integers(6))}", f"n{int(rng.integers(6))}", float(t)) for t in range(40)])


def _config(steps):
    return TipGnnConfig(d=4, d_t=4, layers=2, steps=steps, heads=2, neighbors=3, dropout=0.0)


def test_single_step_weights_are_all_ones():
    """Without propagation there is only one step to attend to."""
    g = _graph()
    table = export_attention(TipGnn.for_graph(_config(0), g), g)
    assert table.weights.shape == (40, 1)
    np.testing.assert_array_equal(table.weights, np.ones((40, 1)))


def test_weights_form_a_distribution_per_query():
    """Each row sums to one and the mean row too."""
    g = _graph()
    table = export_attention(TipGnn.for_graph(_config(3), g, seed=2), g, limit=15, rng=np.random.default_rng(0))
    assert table.weights.shape == (15, 4)
    np.testing.assert_allclose(table.weights.sum(axis=1), 1.0, atol=1e-9)
    np.testing.assert_allclose(table.mean.sum(), 1.0, atol=1e-9)
    assert np.all(np.diff(table.times) >= 0)


def test_csv_layout():
    """Header, one row per query with node names, then the mean row."""
    g = _graph()
    table = export_attention(TipGnn.for_graph(_config(2), g), g, positions=[5, 9])
    with tempfile.TemporaryDirectory() as tmpdir:
        path = table.write_csv(Path(tmpdir) / "out" / "attention.csv", node_names=g.node_names)
        with open(path, newline="", encoding="utf-8") as f:
            rows = list(csv.reader(f))
    assert rows[0] == ["node", "t", "step_0", "step_1", "step_2"]
    assert rows[1][0] == g.node_names[int(g.src[5])]
    assert float(rows[1][1]) == g.ts[5]
    assert rows[-1][0] == "mean"
    assert len(rows) == 4
