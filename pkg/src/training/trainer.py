"""Mini-batch training with validation-AUC early stopping."""

import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np
from tqdm import tqdm

from evaluation.link_eval import LinkMetrics, draw_eval_negatives, evaluate_links
from graph.splits import EdgeSplit
from graph.temporal_graph import TemporalGraph
from tensor import scale
from utils.errors import NumericalError, TrainingError
from utils.logger import format_record, get_logger
from utils.rng import make_rng, STREAM_EVAL_NEGATIVES, STREAM_SHUFFLE, STREAM_TRAIN_NEGATIVES
from .config import TrainConfig
from .early_stop import EarlyStopMonitor
from .loss import link_loss
from .optimizer import Adam

logger = get_logger(__name__)


@dataclass
class EpochRecord:
    epoch: int
    loss: float
    val_accuracy: Optional[float]
    val_auc: Optional[float]
    val_ap: Optional[float]
    seconds: float
    aborted: bool = False

    def to_record(self) -> str:
        return format_record(**{k: ("nan" if v is None else v) for k, v in asdict(self).items()})


@dataclass
class TrainingReport:
    epochs: List[EpochRecord] = field(default_factory=list)
    best_epoch: int = 0
    best_val_auc: Optional[float] = None
    hit_max_epochs: bool = False
    optimizer_state: Optional[Dict[str, object]] = None

    @property
    def losses(self) -> List[float]:
        return [e.loss for e in self.epochs]


def chronological_batches(positions: np.ndarray, batch_size: int) -> List[np.ndarray]:
    return [positions[i:i + batch_size] for i in range(0, len(positions), batch_size)]


def train_step(
    model,
    g: TemporalGraph,
    src: np.ndarray,
    dst: np.ndarray,
    times: np.ndarray,
    optimizer: Adam,
    rng: np.random.Generator,
    neg_samples: int = 1,
    chunk_size: Optional[int] = None,
) -> float:
    """
    One optimizer step on a batch, accumulating gradients over chunks.

    Returns:
        The batch mean loss
    """
    n = len(src)
    chunk_size = chunk_size or n
    optimizer.zero_grad()
    total = 0.0
    for start in range(0, n, chunk_size):
        sl = slice(start, start + chunk_size)
        loss = link_loss(model, g, src[sl], dst[sl], times[sl], rng=rng, neg_samples=neg_samples)
        share = len(src[sl]) / n
        scale(loss, share).backward()
        total += loss.item() * share
    optimizer.step()
    return total


def fit(
    model,
    g: TemporalGraph,
    split: EdgeSplit,
    config: TrainConfig,
    optimizer: Optional[Adam] = None,
    val_negatives: Optional[np.ndarray] = None,
    on_epoch: Optional[Callable[[EpochRecord], None]] = None,
) -> TrainingReport:
    """
    Train until validation AUC stops improving for `patience` epochs.

    Training batches sample from `split.train_graph` when set (inductive
    runs), otherwise from `g`; validation always uses `g`. The best-AUC
    parameters are restored before returning.

    Args:
        val_negatives: One negative per validation interaction; drawn once from
            the run seed when omitted

    Raises:
        TrainingError: If a training position lies past the train boundary
    """
    config.validate()
    train = np.asarray(split.train, dtype=np.int64)
    if len(train) == 0:
        raise TrainingError("training set is empty")
    if train.max() >= split.train_boundary:
        raise TrainingError(
            f"training position {int(train.max())} is past the train boundary {split.train_boundary}"
        )
    train_graph = split.train_graph if split.train_graph is not None else g
    optimizer = optimizer or Adam(model.named_parameters(), lr=config.lr, weight_decay=config.weight_decay)
    negative_rng = make_rng(config.seed, STREAM_TRAIN_NEGATIVES)
    shuffle_rng = make_rng(config.seed, STREAM_SHUFFLE)

    val = np.asarray(split.val, dtype=np.int64)
    val_skipped = 0
    if val_negatives is None and len(val):
        before = len(val)
        val, val_negatives = draw_eval_negatives(g, val, make_rng(config.seed, STREAM_EVAL_NEGATIVES))
        val_skipped = before - len(val)
    if len(val) == 0:
        logger.warning("validation set is empty; early stopping disabled")

    monitor = EarlyStopMonitor(config.patience)
    report = TrainingReport()
    best_state = model.state_dict()

    for epoch in range(1, config.max_epochs + 1):
        started = time.perf_counter()
        model.train()
        order = shuffle_rng.permutation(train) if config.shuffle else train
        batches = chronological_batches(order, config.batch_size)
        losses, sizes = [], []
        aborted = False
        for batch in tqdm(batches, desc=f"epoch {epoch}", leave=False, disable=True if config.quiet else None):
            try:
                loss = train_step(
                    model, train_graph, g.src[batch], g.dst[batch], g.ts[batch],
                    optimizer, negative_rng, config.neg_samples, config.chunk_size,
                )
            except NumericalError as exc:
                logger.error("epoch %d aborted: %s", epoch, exc)
                aborted = True
                break
            losses.append(loss)
            sizes.append(len(batch))
        mean_loss = float(np.average(losses, weights=sizes)) if losses else float("nan")

        metrics: Optional[LinkMetrics] = None
        if len(val):
            metrics = evaluate_links(model, g, val, val_negatives, config.chunk_size, skipped=val_skipped)
        record = EpochRecord(
            epoch=epoch,
            loss=mean_loss,
            val_accuracy=metrics.accuracy if metrics else None,
            val_auc=metrics.auc if metrics else None,
            val_ap=metrics.ap if metrics else None,
            seconds=time.perf_counter() - started,
            aborted=aborted,
        )
        report.epochs.append(record)
        logger.info(record.to_record())
        if on_epoch is not None:
            on_epoch(record)

        if metrics is None:
            best_state = model.state_dict()
            report.best_epoch = epoch
            report.optimizer_state = optimizer.state_dict()
            continue
        stop = monitor.update(metrics.auc)
        if monitor.improved:
            best_state = model.state_dict()
            report.best_epoch = epoch
            report.best_val_auc = metrics.auc
            report.optimizer_state = optimizer.state_dict()
        if stop:
            logger.info("early stop at epoch %d, best epoch %d (val auc %.4f)", epoch, monitor.best_epoch, monitor.best_value)
            break
    else:
        report.hit_max_epochs = True
        logger.warning("reached max_epochs=%d; returning the best model so far", config.max_epochs)

    model.load_state_dict(best_state)
    model.eval()
    return report
