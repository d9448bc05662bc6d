"""Experiment orchestration: per-seed runs, aggregation and ablation sweeps."""

import copy
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from evaluation.link_eval import draw_eval_negatives, evaluate_links
from evaluation.node_classification import extract_interaction_embeddings, node_classification
from graph.splits import EdgeSplit, hide_nodes_for_inductive, transductive_split
from graph.temporal_graph import TemporalGraph
from model.checkpoint import load_checkpoint, save_checkpoint
from model.tip_gnn import TipGnn
from tensor import set_default_dtype
from training.trainer import fit
from utils.config import Config
from utils.errors import ConfigError, TipGnnError
from utils.logger import add_file_handler, get_logger
from utils.rng import make_rng, STREAM_TEST_NEGATIVES
from .config import ExperimentConfig
from .datasets import labels_by_position, parse_dataset, read_labels
from .run_store import RunStore

logger = get_logger(__name__)


@dataclass
class SeedResult:
    seed: int
    status: str
    metrics: Dict[str, float] = field(default_factory=dict)
    best_epoch: int = 0
    epochs: int = 0
    hit_max_epochs: bool = False
    parameter_count: int = 0
    seconds: float = 0.0
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.status == "ok"


@dataclass
class ExperimentResult:
    task: str
    config_hash: str
    root: str
    rows: List[SeedResult] = field(default_factory=list)
    aggregate: Dict[str, Tuple[float, float]] = field(default_factory=dict)

    @property
    def failed(self) -> bool:
        return any(not r.ok for r in self.rows)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'task': self.task,
            'config_hash': self.config_hash,
            'failed': self.failed,
            'rows': [asdict(r) for r in self.rows],
            'aggregate': {k: {'mean': m, 'std': s} for k, (m, s) in self.aggregate.items()},
        }


def aggregate(rows: Sequence[SeedResult]) -> Dict[str, Tuple[float, float]]:
    """Mean and (population) standard deviation of each metric over successful seeds."""
    names = sorted({name for r in rows if r.ok for name in r.metrics})
    summary = {}
    for name in names:
        values = np.array([r.metrics[name] for r in rows if r.ok and name in r.metrics])
        summary[name] = (float(values.mean()), float(values.std()))
    return summary


def make_split(cfg: ExperimentConfig, g: TemporalGraph, seed: int) -> EdgeSplit:
    if cfg.task == "link_inductive":
        return hide_nodes_for_inductive(g, cfg.hidden_fraction, rng_seed=seed)
    return transductive_split(g)


def run_seed(
    cfg: ExperimentConfig,
    seed: int,
    g: Optional[TemporalGraph] = None,
    on_epoch: Optional[Callable] = None,
) -> SeedResult:
    """
    Split, train with early stopping, evaluate and persist one seed.

    Raises:
        TipGnnError: Any stage failure (run_experiment records it per seed)
    """
    set_default_dtype(Config.numpy_dtype())
    started = time.perf_counter()
    store = RunStore(Path(cfg.out), cfg.task, cfg.config_hash())
    root_logger = get_logger()
    handler = add_file_handler(root_logger, store.log_path(seed))
    try:
        store.save_config(seed, cfg.to_dict())
        if g is None:
            g = parse_dataset(Path(cfg.dataset), cfg.format, cfg.node_features, cfg.has_weight)
        split = make_split(cfg, g, seed)
        model = TipGnn.for_graph(cfg.model, g, seed=seed)
        logger.info("seed %d: %d parameters, %d/%d/%d train/val/test interactions",
                    seed, model.parameter_count(), len(split.train), len(split.val), len(split.test))

        report = fit(
            model, g, split, replace(cfg.train, seed=seed),
            on_epoch=lambda record: _record_epoch(store, seed, record, on_epoch),
        )
        save_checkpoint(
            store.checkpoint_path(seed), model, report.optimizer_state,
            extra={'seed': seed, 'best_epoch': report.best_epoch, 'config_hash': store.config_hash},
        )

        metrics: Dict[str, float] = {}
        if report.best_val_auc is not None:
            metrics['val_auc'] = report.best_val_auc
            store.append_metric(seed, 'auc', 'val', report.best_val_auc)
        if cfg.task == "node_classification":
            labels = labels_by_position(g, read_labels(Path(cfg.labels)))
            embeddings = extract_interaction_embeddings(model, g, np.arange(g.num_edges), cfg.train.chunk_size)
            ranges = split.ranges
            rows = tuple(np.arange(r.start, r.stop) for r in (ranges.train, ranges.val, ranges.test))
            result = node_classification(embeddings, labels, split=rows, seed=seed)
            metrics['test_auc'] = result.test_auc
            store.append_metric(seed, 'auc', 'test', result.test_auc, task='node_classification')
        else:
            test, negatives = draw_eval_negatives(g, split.test, make_rng(seed, STREAM_TEST_NEGATIVES))
            link = evaluate_links(model, g, test, negatives, cfg.train.chunk_size, skipped=len(split.test) - len(test))
            for name in ('accuracy', 'auc', 'ap'):
                metrics[f'test_{name}'] = getattr(link, name)
                store.append_metric(seed, name, 'test', getattr(link, name), n=link.n_positive)

        return SeedResult(
            seed=seed,
            status="ok",
            metrics=metrics,
            best_epoch=report.best_epoch,
            epochs=len(report.epochs),
            hit_max_epochs=report.hit_max_epochs,
            parameter_count=model.parameter_count(),
            seconds=time.perf_counter() - started,
        )
    finally:
        root_logger.removeHandler(handler)
        handler.close()


def _record_epoch(store: RunStore, seed: int, record, on_epoch: Optional[Callable]) -> None:
    store.append_epoch(seed, record.to_record())
    if on_epoch is not None:
        on_epoch(record)


def _run_seed_safely(
    cfg: ExperimentConfig,
    seed: int,
    g: Optional[TemporalGraph] = None,
    on_epoch: Optional[Callable] = None,
) -> SeedResult:
    started = time.perf_counter()
    try:
        return run_seed(cfg, seed, g, on_epoch)
    except TipGnnError as exc:
        logger.error("seed %d failed: %s", seed, exc)
        return SeedResult(seed=seed, status="failed", error=f"{type(exc).__name__}: {exc}",
                          seconds=time.perf_counter() - started)
    except Exception as exc:
        logger.exception("seed %d failed unexpectedly", seed)
        return SeedResult(seed=seed, status="failed", error=f"{type(exc).__name__}: {exc}",
                          seconds=time.perf_counter() - started)


def run_experiment(
    cfg: ExperimentConfig,
    g: Optional[TemporalGraph] = None,
    on_seed: Optional[Callable[[SeedResult], None]] = None,
    on_epoch: Optional[Callable] = None,
) -> ExperimentResult:
    """
    Run every seed, then write summary.json with mean and std per metric.

    A failing seed is recorded with its error and does not stop the others.
    With workers > 1 seeds run in a process pool, each loading the dataset;
    `on_epoch` is only called for in-process runs.
    """
    cfg.validate()
    store = RunStore(Path(cfg.out), cfg.task, cfg.config_hash())
    result = ExperimentResult(task=cfg.task, config_hash=store.config_hash, root=str(store.root))

    if cfg.workers > 1 and len(cfg.seeds) > 1:
        with ProcessPoolExecutor(max_workers=min(cfg.workers, len(cfg.seeds))) as pool:
            futures = [pool.submit(_run_seed_safely, cfg, seed) for seed in cfg.seeds]
            for future in futures:
                row = future.result()
                result.rows.append(row)
                if on_seed:
                    on_seed(row)
    else:
        if g is None:
            g = parse_dataset(Path(cfg.dataset), cfg.format, cfg.node_features, cfg.has_weight)
        for seed in cfg.seeds:
            row = _run_seed_safely(cfg, seed, g, on_epoch)
            result.rows.append(row)
            if on_seed:
                on_seed(row)

    result.aggregate = aggregate(result.rows)
    store.save_summary(result.to_dict())
    if result.failed:
        logger.warning("%d of %d seeds failed", sum(not r.ok for r in result.rows), len(result.rows))
    return result


def parse_sweep(spec: str) -> Tuple[str, List[str]]:
    """`steps=0,1,2,3` -> ("steps", ["0", "1", "2", "3"])."""
    if "=" not in spec:
        raise ConfigError(f"sweep must look like key=v1,v2,..., got {spec!r}", "sweep")
    key, values = spec.split("=", 1)
    items = [v.strip() for v in values.split(",") if v.strip()]
    if not items:
        raise ConfigError("sweep has no values", "sweep")
    return key.strip(), items


def ablate(
    cfg: ExperimentConfig,
    key: str,
    values: Sequence[Any],
    g: Optional[TemporalGraph] = None,
    on_seed: Optional[Callable[[SeedResult], None]] = None,
    on_epoch: Optional[Callable] = None,
) -> List[Tuple[Any, ExperimentResult]]:
    """Run the experiment once per value of one knob; one aggregate per value."""
    results = []
    for value in values:
        variant = copy.deepcopy(cfg).with_overrides({key: value})
        logger.info("ablation %s=%s", key, value)
        results.append((value, run_experiment(variant, g=g, on_seed=on_seed, on_epoch=on_epoch)))
    return results


def evaluate_checkpoint(cfg: ExperimentConfig, checkpoint: Path, g: Optional[TemporalGraph] = None):
    """
    Reload a saved model and score the test split of the seed it was trained with.

    Returns:
        (LinkMetrics, seed)
    """
    if g is None:
        g = parse_dataset(Path(cfg.dataset), cfg.format, cfg.node_features, cfg.has_weight)
    model, _, meta = load_checkpoint(checkpoint)
    if model.num_nodes != g.num_nodes:
        raise ConfigError(
            f"checkpoint was trained on {model.num_nodes} nodes, dataset has {g.num_nodes}", "dataset"
        )
    seed = int(meta.get('extra', {}).get('seed', meta['seed']))
    split = make_split(cfg, g, seed)
    test, negatives = draw_eval_negatives(g, split.test, make_rng(seed, STREAM_TEST_NEGATIVES))
    metrics = evaluate_links(model, g, test, negatives, cfg.train.chunk_size, skipped=len(split.test) - len(test))
    return metrics, seed
