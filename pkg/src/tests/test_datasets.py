"""Tests for dataset parsing and synthetic data writers."""

import tempfile
from pathlib import Path

import numpy as np
import pytest

from experiments.datasets import labels_by_position, parse_dataset, read_edge_records, read_labels, read_node_features
from experiments.synthetic import planted_transition_edges, write_edge_list
from utils.errors import DatasetError


def _write(tmpdir: str, name: str, text: str) -> Path:
    path = Path(tmpdir) / name
    path.write_text(text, encoding="utf-8")
    return path


def test_edge_list_three_and_four_columns():
    """`src dst t` and `src dst weight t feat..` lines; headers and blanks are skipped."""
    with tempfile.TemporaryDirectory() as tmpdir:
        path = _write(tmpdir, "edges.txt", "% bipartite\n\nu1 i1 10\nu2 i1 5.5\n")
        records = read_edge_records(path)
        assert [(r.src, r.dst, r.t) for r in records] == [("u1", "i1", 10.0), ("u2", "i1", 5.5)]
        assert records[0].line == 3

        path = _write(tmpdir, "weighted.txt", "# header\nu1 i1 1 10 0.5 0.25\n")
        (record,) = read_edge_records(path)
        assert record.t == 10.0
        assert record.feat == [0.5, 0.25]


def test_edge_list_without_weight_column():
    """has_weight=False reads `src dst t feat..`; the default would take t for a weight."""
    with tempfile.TemporaryDirectory() as tmpdir:
        path = _write(tmpdir, "unweighted.txt", "u1 i1 10 0.5 0.25\nu2 i1 12 0.0 1.0\n")
        records = read_edge_records(path, has_weight=False)
        assert [r.t for r in records] == [10.0, 12.0]
        assert records[0].feat == [0.5, 0.25]

        weighted = read_edge_records(path)
        assert weighted[0].t == 0.5
        assert weighted[0].feat == [0.25]

        g = parse_dataset(path, has_weight=False)
        assert g.edge_dim == 2
        assert g.ts.tolist() == [10.0, 12.0]

        assert read_edge_records(_write(tmpdir, "plain.txt", "a b 3\n"), has_weight=False)[0].t == 3.0


def test_csv_with_features_and_header():
    """A non-numeric first row is a header; trailing columns are edge features."""
    with tempfile.TemporaryDirectory() as tmpdir:
        path = _write(tmpdir, "edges.csv", "user,item,timestamp,f1,f2\n1,7,0.0,0.1,0.2\n2,7,3.0,0.3,0.4\n")
        g = parse_dataset(path, "csv_with_features")
        assert g.num_edges == 2
        assert g.edge_dim == 2
        np.testing.assert_allclose(g.edge_feat[1], [0.3, 0.4])


def test_malformed_lines_report_their_number():
    """Errors name the offending line."""
    with tempfile.TemporaryDirectory() as tmpdir:
        path = _write(tmpdir, "bad.txt", "a b 1\na b\n")
        with pytest.raises(DatasetError, match="line 2"):
            read_edge_records(path)
        path = _write(tmpdir, "bad_time.txt", "a b 1\na b 1 noon\n")
        with pytest.raises(DatasetError, match="line 2"):
            read_edge_records(path)


def test_empty_and_missing_files():
    """A file without data lines, or no file at all, is a dataset error."""
    with tempfile.TemporaryDirectory() as tmpdir:
        with pytest.raises(DatasetError, match="no interactions"):
            read_edge_records(_write(tmpdir, "empty.txt", "% only a header\n"))
        with pytest.raises(DatasetError, match="cannot read"):
            read_edge_records(Path(tmpdir) / "missing.txt")
        with pytest.raises(DatasetError, match="unknown dataset format"):
            read_edge_records(_write(tmpdir, "x.txt", "a b 1\n"), "parquet")


def test_negative_timestamp_names_the_line():
    """Validation errors from graph construction keep the record line."""
    with tempfile.TemporaryDirectory() as tmpdir:
        path = _write(tmpdir, "neg.txt", "a b 1\nb c -4\n")
        with pytest.raises(DatasetError, match="line 2"):
            parse_dataset(path)


def test_node_features_and_labels():
    """Feature tables map ids to rows; labels follow file order and are reordered by time."""
    with tempfile.TemporaryDirectory() as tmpdir:
        feats = read_node_features(_write(tmpdir, "nodes.csv", "id,x,y\na,1,0\nb,0,1\n"))
        assert feats == {"a": [1.0, 0.0], "b": [0.0, 1.0]}

        edges = _write(tmpdir, "edges.txt", "a b 5\nb a 1\na b 3\n")
        labels = read_labels(_write(tmpdir, "labels.txt", "1\n0\n0\n"))
        g = parse_dataset(edges, node_features=_write(tmpdir, "n.csv", "a,1,0\nb,0,1\n"))
        assert g.node_dim == 2
        # chronological order is the 2nd, 3rd, then 1st file line
        assert labels_by_position(g, labels).tolist() == [0, 0, 1]

        with pytest.raises(DatasetError):
            read_labels(_write(tmpdir, "bad_labels.txt", "1\n2\n"))
        with pytest.raises(DatasetError):
            labels_by_position(g, np.array([1, 0]))


def test_written_edge_list_parses_back():
    """The synthetic writer produces a file the reader accepts."""
    records = planted_transition_edges(num_nodes=20, num_interactions=50, seed=1)
    with tempfile.TemporaryDirectory() as tmpdir:
        path = write_edge_list(records, Path(tmpdir) / "nested" / "synthetic.txt")
        g = parse_dataset(path)
        assert g.num_edges == 50
        assert g.num_nodes <= 20
        assert np.all(np.diff(g.ts) >= 0)
