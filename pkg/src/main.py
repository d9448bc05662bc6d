#!/usr/bin/env python3
"""
TIP-GNN - temporal interaction graph learning from the command line.

Subcommands train link predictors or node classifiers over several seeds,
re-evaluate saved checkpoints, sweep one knob for ablations, export the
per-step fusion weights of a trained model and summarize datasets.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from experiments import (
    DATASET_FORMATS,
    TASKS,
    ExperimentConfig,
    ablate,
    evaluate_checkpoint,
    export_attention,
    parse_dataset,
    parse_sweep,
    run_experiment,
)
from model import load_checkpoint
from model.config import NODE_FEATURE_MODES, SAMPLERS, TipGnnConfig
from training.config import TrainConfig
from ui import ConsoleUI
from utils.config import Config
from utils.errors import TipGnnError, TrainingError
from utils.logger import format_record, get_logger, setup_logger
from utils.rng import make_rng

logger = get_logger(__name__)

_EXPERIMENT = ExperimentConfig()
_MODEL = TipGnnConfig()
_TRAIN = TrainConfig()

# flag -> configuration key, for flags that override a config field
_OVERRIDES = (
    "dataset", "format", "has_weight", "task", "node_features", "labels", "hidden_fraction",
    "seeds", "out", "workers",
    "d", "d_t", "layers", "heads", "steps", "mlp_depth", "alpha", "neighbors", "dropout",
    "sampler", "node_feature_mode", "normalize_transitions",
    "batch_size", "neg_samples", "shuffle", "lr", "weight_decay", "max_epochs", "patience",
)


def _add_experiment_flags(parser: argparse.ArgumentParser) -> None:
    """Dataset, model and training flags shared by every subcommand."""
    data = parser.add_argument_group("data")
    data.add_argument("--config", type=Path, help="flat `key = value` config file; flags override it")
    data.add_argument("--dataset", help="interaction file (required unless set in --config)")
    data.add_argument("--format", choices=DATASET_FORMATS, help="dataset format (default: edge_list)")
    data.add_argument("--has-weight", action=argparse.BooleanOptionalAction,
                      help="edge_list lines longer than `src dst t` carry a weight in column 3 "
                           f"(default: {_EXPERIMENT.has_weight})")
    data.add_argument("--task", choices=TASKS, help="experiment task (default: link_transductive)")
    data.add_argument("--node-features", help="node feature file, `node_id, f1 .. fd` per line")
    data.add_argument("--labels", help="0/1 label per interaction, dataset file order (node_classification)")
    data.add_argument("--hidden-fraction", type=float,
                      help=f"share of nodes hidden for link_inductive (default: {_EXPERIMENT.hidden_fraction})")

    model = parser.add_argument_group("model")
    model.add_argument("--d", type=int, help=f"embedding width (default: {_MODEL.d})")
    model.add_argument("--d-t", type=int, help=f"time encoding width (default: {_MODEL.d_t})")
    model.add_argument("--layers", type=int, help=f"stacked layers (default: {_MODEL.layers})")
    model.add_argument("--heads", type=int, help=f"pooling attention heads (default: {_MODEL.heads})")
    model.add_argument("--steps", type=int, help=f"propagation steps (default: {_MODEL.steps})")
    model.add_argument("--mlp-depth", type=int, help=f"propagation MLP depth (default: {_MODEL.mlp_depth})")
    model.add_argument("--alpha", type=float, help=f"propagation damping (default: {_MODEL.alpha})")
    model.add_argument("--neighbors", type=int, help=f"sampled neighbors per query (default: {_MODEL.neighbors})")
    model.add_argument("--dropout", type=float, help=f"dropout probability (default: {_MODEL.dropout})")
    model.add_argument("--sampler", choices=SAMPLERS,
                       help=f"neighbor sampler (default: {_MODEL.sampler})")
    model.add_argument("--node-feature-mode", choices=NODE_FEATURE_MODES,
                       help=f"initial node features (default: {_MODEL.node_feature_mode})")
    model.add_argument("--normalize-transitions", action=argparse.BooleanOptionalAction,
                       help=f"row-normalize transition matrices (default: {_MODEL.normalize_transitions})")

    train = parser.add_argument_group("training")
    train.add_argument("--batch-size", type=int, help=f"interactions per batch (default: {_TRAIN.batch_size})")
    train.add_argument("--neg-samples", type=int, help=f"negatives per positive (default: {_TRAIN.neg_samples})")
    train.add_argument("--shuffle", action=argparse.BooleanOptionalAction,
                       help=f"shuffle batch order instead of chronological (default: {_TRAIN.shuffle})")
    train.add_argument("--lr", type=float, help=f"Adam learning rate (default: {_TRAIN.lr})")
    train.add_argument("--weight-decay", type=float, help=f"L2 penalty (default: {_TRAIN.weight_decay})")
    train.add_argument("--max-epochs", type=int, help=f"epoch cap (default: {_TRAIN.max_epochs})")
    train.add_argument("--patience", type=int, help=f"early-stopping patience (default: {_TRAIN.patience})")
    train.add_argument("--seeds", type=int, nargs="+",
                       help=f"seeds to run (default: {' '.join(map(str, Config.DEFAULT_SEEDS))})")

    run = parser.add_argument_group("run")
    run.add_argument("--out", help=f"results directory (default: {Config.OUTPUT_DIR})")
    run.add_argument("--workers", type=int, help=f"parallel seed processes (default: {Config.WORKERS})")
    run.add_argument("--quiet", action="store_true", help="hide progress bars and epoch lines")
    run.add_argument("--log-level", help=f"console log level (default: {Config.LOG_LEVEL})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tipgnn",
        description="Temporal interaction graph learning with transition propagation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train and evaluate every seed, then aggregate")
    _add_experiment_flags(train)

    evaluate = sub.add_parser("evaluate", help="score the test split with a saved checkpoint")
    _add_experiment_flags(evaluate)
    evaluate.add_argument("--checkpoint", type=Path, required=True, help="checkpoint.npz written by train")

    sweep = sub.add_parser("ablate", help="repeat the experiment for each value of one knob")
    _add_experiment_flags(sweep)
    sweep.add_argument("--sweep", required=True, help="knob and values, e.g. steps=0,1,2,3")

    export = sub.add_parser("export-attention", help="write last-layer fusion weights per propagation step")
    _add_experiment_flags(export)
    export.add_argument("--checkpoint", type=Path, required=True, help="checkpoint.npz written by train")
    export.add_argument("--limit", type=int, default=1000, help="queries to sample (default: 1000)")
    export.add_argument("--csv", type=Path, help="output CSV (default: next to the checkpoint)")

    inspect = sub.add_parser("inspect-dataset", help="print dataset statistics")
    _add_experiment_flags(inspect)
    return parser


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    """Config file values first, then every flag that was given."""
    overrides: Dict[str, object] = {key: getattr(args, key, None) for key in _OVERRIDES}
    if args.quiet:
        overrides["quiet"] = True
    if args.config:
        return ExperimentConfig.from_file(args.config, overrides)
    return ExperimentConfig().with_overrides(overrides)


def _print_metrics(label: str, metrics: Dict[str, float], **fields) -> None:
    for name, value in sorted(metrics.items()):
        ConsoleUI.print_record(format_record(run=label, metric=name, value=value, **fields))


def _on_seed(result) -> None:
    ConsoleUI.display_seed_result(result)


def cmd_train(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    cfg.validate()
    ConsoleUI.print_header(f"TIP-GNN {cfg.task} on {cfg.dataset}")
    on_epoch = None if cfg.train.quiet else ConsoleUI.display_epoch
    result = run_experiment(cfg, on_seed=_on_seed, on_epoch=on_epoch)
    for row in result.rows:
        if row.ok:
            _print_metrics(result.task, row.metrics, seed=row.seed, config_hash=result.config_hash)
    ConsoleUI.display_results_table([(cfg.task, result.aggregate)])
    ConsoleUI.print_info(f"results in {result.root}")
    return TrainingError.exit_code if result.failed else 0


def cmd_ablate(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    key, values = parse_sweep(args.sweep)
    cfg.validate()
    ConsoleUI.print_header(f"Ablation over {key} = {', '.join(values)}")
    on_epoch = None if cfg.train.quiet else ConsoleUI.display_epoch
    results = ablate(cfg, key, values, on_seed=_on_seed, on_epoch=on_epoch)
    rows = []
    failed = False
    for value, result in results:
        label = f"{key}={value}"
        for name, (mean, std) in sorted(result.aggregate.items()):
            ConsoleUI.print_record(format_record(
                run=label, metric=name, mean=mean, std=std, config_hash=result.config_hash,
            ))
        rows.append((label, result.aggregate))
        failed = failed or result.failed
    ConsoleUI.display_results_table(rows)
    return TrainingError.exit_code if failed else 0


def cmd_evaluate(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    cfg.validate()
    metrics, seed = evaluate_checkpoint(cfg, args.checkpoint)
    ConsoleUI.print_section(f"Checkpoint {args.checkpoint} (seed {seed})")
    _print_metrics("evaluate", {f"test_{k}": getattr(metrics, k) for k in ("accuracy", "auc", "ap")},
                   seed=seed, config_hash=cfg.config_hash())
    if metrics.skipped:
        ConsoleUI.print_warning(f"{metrics.skipped} test interactions skipped (no negative available)")
    return 0


def cmd_export_attention(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    if not cfg.dataset:
        cfg.validate()
    g = parse_dataset(Path(cfg.dataset), cfg.format, cfg.node_features, cfg.has_weight)
    model, _, meta = load_checkpoint(args.checkpoint)
    seed = int(meta.get("extra", {}).get("seed", meta["seed"]))
    table = export_attention(model, g, limit=args.limit, rng=make_rng(seed, 0))
    path = args.csv or Path(args.checkpoint).with_name("attention.csv")
    table.write_csv(path, node_names=g.node_names)
    ConsoleUI.display_attention_preview(table, node_names=g.node_names)
    for k, value in enumerate(table.mean):
        ConsoleUI.print_record(format_record(run="export-attention", metric=f"mean_weight_step_{k}", value=float(value)))
    ConsoleUI.print_success("fusion weights written", str(path))
    return 0


def cmd_inspect_dataset(cfg: ExperimentConfig, args: argparse.Namespace) -> int:
    if not cfg.dataset:
        cfg.validate()
    g = parse_dataset(Path(cfg.dataset), cfg.format, cfg.node_features, cfg.has_weight)
    stats = g.statistics()
    ConsoleUI.display_dataset_summary(cfg.dataset, stats)
    ConsoleUI.print_record(format_record(
        dataset=cfg.dataset, nodes=stats.num_nodes, edges=stats.num_edges,
        density=stats.density, repetition=stats.repetition, timespan_days=stats.timespan_days,
    ))
    return 0


COMMANDS = {
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "ablate": cmd_ablate,
    "export-attention": cmd_export_attention,
    "inspect-dataset": cmd_inspect_dataset,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for the application; returns the process exit code."""
    args = build_parser().parse_args(argv)
    level = logging.getLevelName(args.log_level.upper()) if args.log_level else Config.log_level()
    setup_logger(level=level if isinstance(level, int) else logging.INFO, console=not args.quiet)
    try:
        cfg = build_config(args)
        return COMMANDS[args.command](cfg, args)
    except KeyboardInterrupt:
        ConsoleUI.print_warning("Interrupted.")
        return 130
    except TipGnnError as e:
        ConsoleUI.print_error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except Exception as e:
        logger.exception("unexpected failure")
        ConsoleUI.print_error(f"Unexpected error: {e}")
        return 1


if __name__ == '__main__':
    sys.exit(main())
