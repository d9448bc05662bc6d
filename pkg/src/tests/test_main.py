"""Tests for the command line: subcommands, records and exit codes."""

import tempfile
from pathlib import Path
from unittest.mock import patch

import pytest

from experiments import planted_transition_edges, write_edge_list
from main import build_config, build_parser, main

TINY_FLAGS = [
    "--d", "8", "--layers", "1", "--steps", "1", "--heads", "2", "--neighbors", "4",
    "--batch-size", "50", "--max-epochs", "1", "--lr", "0.001", "--quiet",
]


def _dataset(tmpdir: str) -> str:
    path = write_edge_list(planted_transition_edges(num_nodes=20, num_interactions=120, seed=0),
                           Path(tmpdir) / "planted.txt")
    return str(path)


def _output(mock_print) -> str:
    return '\n'.join(str(call[0][0]) if call[0] else '' for call in mock_print.call_args_list)


def test_flags_override_defaults():
    """Only given flags change the configuration."""
    args = build_parser().parse_args(["train", "--dataset", "x.txt", "--steps", "3", "--seeds", "4", "5"])
    cfg = build_config(args)
    assert cfg.dataset == "x.txt"
    assert cfg.model.steps == 3
    assert cfg.seeds == [4, 5]
    assert cfg.model.d == 128


def test_every_knob_has_a_flag():
    """Time width, negatives, shuffling, normalization, hidden share and weight column are flags too."""
    args = build_parser().parse_args([
        "train", "--dataset", "x.txt", "--d-t", "16", "--neg-samples", "3", "--shuffle",
        "--normalize-transitions", "--hidden-fraction", "0.2", "--no-has-weight",
    ])
    cfg = build_config(args)
    assert cfg.model.d_t == 16
    assert cfg.model.normalize_transitions is True
    assert cfg.train.neg_samples == 3
    assert cfg.train.shuffle is True
    assert cfg.hidden_fraction == 0.2
    assert cfg.has_weight is False

    untouched = build_config(build_parser().parse_args(["train", "--dataset", "x.txt"]))
    assert untouched.train.shuffle is False
    assert untouched.has_weight is True
    assert untouched.model.d_t == 128


def test_missing_dataset_is_a_config_error():
    """No dataset anywhere exits with the configuration code."""
    with patch('builtins.print'):
        assert main(["train", "--quiet"]) == 2


def test_unreadable_dataset_is_a_dataset_error():
    """A path that does not exist exits with the data code."""
    with tempfile.TemporaryDirectory() as tmpdir:
        with patch('builtins.print') as mock_print:
            code = main(["inspect-dataset", "--dataset", str(Path(tmpdir) / "nope.txt"), "--quiet"])
    assert code == 3
    assert "DatasetError" in _output(mock_print)


def test_unknown_subcommand_exits_with_usage_error():
    """argparse rejects unknown commands."""
    with pytest.raises(SystemExit) as excinfo:
        main(["fly"])
    assert excinfo.value.code == 2


def test_inspect_dataset_prints_statistics_record():
    """Statistics are shown and emitted as one key=value record."""
    with tempfile.TemporaryDirectory() as tmpdir:
        with patch('builtins.print') as mock_print:
            code = main(["inspect-dataset", "--dataset", _dataset(tmpdir), "--quiet"])
    assert code == 0
    output = _output(mock_print)
    assert "edges=120" in output
    assert "repetition=" in output


def test_train_evaluate_and_export_attention():
    """train writes a checkpoint that evaluate and export-attention reuse."""
    with tempfile.TemporaryDirectory() as tmpdir:
        dataset = _dataset(tmpdir)
        out = str(Path(tmpdir) / "out")
        common = ["--dataset", dataset, "--out", out, *TINY_FLAGS]
        with patch('builtins.print') as mock_print:
            assert main(["train", "--seeds", "0", *common]) == 0
        assert "metric=test_auc" in _output(mock_print)

        (checkpoint,) = Path(out).glob("link_transductive-*/seed-0/checkpoint.npz")
        with patch('builtins.print') as mock_print:
            assert main(["evaluate", "--checkpoint", str(checkpoint), *common]) == 0
        assert "run=evaluate metric=test_auc" in _output(mock_print)

        with patch('builtins.print') as mock_print:
            assert main(["export-attention", "--checkpoint", str(checkpoint), "--limit", "20", *common]) == 0
        csv_path = checkpoint.with_name("attention.csv")
        assert csv_path.exists()
        assert len(csv_path.read_text(encoding="utf-8").splitlines()) == 22
        assert "mean_weight_step_1" in _output(mock_print)


def test_ablate_prints_one_block_per_value():
    """Every swept value gets aggregate records."""
    with tempfile.TemporaryDirectory() as tmpdir:
        args = ["ablate", "--sweep", "alpha=0,1", "--seeds", "0",
                "--dataset", _dataset(tmpdir), "--out", str(Path(tmpdir) / "out"), *TINY_FLAGS]
        with patch('builtins.print') as mock_print:
            assert main(args) == 0
    output = _output(mock_print)
    assert "run=alpha=0 metric=test_auc" in output
    assert "run=alpha=1 metric=test_auc" in output
