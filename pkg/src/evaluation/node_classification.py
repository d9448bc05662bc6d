"""Downstream temporal node classification on frozen interaction embeddings."""

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from tensor import Linear, Module, Tensor, log_sigmoid, mul, neg, relu, scale, sigmoid, tsum, add
from training.optimizer import Adam
from training.early_stop import EarlyStopMonitor
from utils.errors import TrainingError
from utils.logger import format_record, get_logger
from utils.rng import make_rng, STREAM_CLASSIFIER
from .metrics import ScoredSet, auc_roc

logger = get_logger(__name__)

HIDDEN_SIZES = (80, 10)


class NodeClassifier(Module):
    """d -> 80 -> 10 -> 1 MLP with ReLU; outputs logits."""

    def __init__(self, d: int, rng: np.random.Generator, hidden: Sequence[int] = HIDDEN_SIZES):
        sizes = [d, *hidden, 1]
        self.layers = [Linear(a, b, rng) for a, b in zip(sizes[:-1], sizes[1:])]

    def __call__(self, x: Tensor) -> Tensor:
        for i, layer in enumerate(self.layers):
            x = layer(x)
            if i < len(self.layers) - 1:
                x = relu(x)
        return x.reshape(-1)

    def predict(self, x: np.ndarray) -> np.ndarray:
        return sigmoid(self(Tensor(x))).data


@dataclass
class NodeClassificationResult:
    test_auc: float
    val_auc: Optional[float]
    best_epoch: int
    epochs: int

    def to_record(self) -> str:
        return format_record(**self.__dict__)


def extract_interaction_embeddings(model, g, positions, chunk_size: int = 200) -> np.ndarray:
    """
    Embed the source of each interaction at its own timestamp.

    Sampling is strictly before the timestamp, so the labeled interaction
    itself never feeds its embedding.
    """
    positions = np.asarray(positions, dtype=np.int64)
    model.eval()
    rows = []
    for start in range(0, len(positions), chunk_size):
        chunk = positions[start:start + chunk_size]
        h, _ = model.embed_batch(g, g.src[chunk], g.ts[chunk])
        rows.append(h.data)
    return np.concatenate(rows) if rows else np.empty((0, model.config.d))


def oversample_positives(indices: np.ndarray, labels: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """
    Duplicate positives (drawn with replacement) until they match the negatives.

    Batches without positives, or already balanced, are returned unchanged.
    """
    indices = np.asarray(indices, dtype=np.int64)
    positives = indices[labels[indices] == 1]
    n_neg = len(indices) - len(positives)
    if len(positives) == 0 or len(positives) >= n_neg:
        return indices
    extra = rng.choice(positives, size=n_neg - len(positives), replace=True)
    return np.concatenate([indices, extra])


def _bce(logits: Tensor, y: np.ndarray) -> Tensor:
    y_t = Tensor(y.astype(logits.data.dtype))
    positive = mul(log_sigmoid(logits), y_t)
    negative = mul(log_sigmoid(neg(logits)), Tensor(1.0 - y_t.data))
    return scale(tsum(add(positive, negative)), -1.0 / len(y))


def chronological_row_split(n: int, ratios=(0.70, 0.15, 0.15)) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    first = int(np.floor(ratios[0] * n + 1e-9))
    second = int(np.floor((ratios[0] + ratios[1]) * n + 1e-9))
    rows = np.arange(n)
    return rows[:first], rows[first:second], rows[second:]


def node_classification(
    embeddings: np.ndarray,
    labels: np.ndarray,
    split: Optional[Tuple[np.ndarray, np.ndarray, np.ndarray]] = None,
    lr: float = 1e-3,
    batch_size: int = 200,
    max_epochs: int = 100,
    patience: int = 10,
    seed: int = 0,
) -> NodeClassificationResult:
    """
    Train the downstream MLP and report test AUC.

    Rows are assumed chronological; without `split` they are cut 70:15:15.
    Early stopping watches validation AUC with the given patience.

    Raises:
        TrainingError: If the training rows contain no positive label
    """
    X = np.asarray(embeddings, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64).reshape(-1)
    if len(X) != len(y):
        raise TrainingError(f"{len(X)} embeddings but {len(y)} labels")
    train, val, test = split if split is not None else chronological_row_split(len(y))
    train, val, test = (np.asarray(a, dtype=np.int64) for a in (train, val, test))
    if y[train].sum() == 0:
        raise TrainingError("no positive label in the classifier training rows")

    rng = make_rng(seed, STREAM_CLASSIFIER)
    model = NodeClassifier(X.shape[1], rng)
    optimizer = Adam(model.named_parameters(), lr=lr)
    monitor = EarlyStopMonitor(patience)
    has_val = len(val) > 0 and 0 < y[val].sum() < len(val)
    best_state = model.state_dict()
    epochs = 0

    for epoch in range(1, max_epochs + 1):
        epochs = epoch
        order = rng.permutation(train)
        for start in range(0, len(order), batch_size):
            batch = oversample_positives(order[start:start + batch_size], y, rng)
            optimizer.zero_grad()
            _bce(model(Tensor(X[batch])), y[batch]).backward()
            optimizer.step()
        if not has_val:
            best_state = model.state_dict()
            continue
        val_auc = auc_roc(ScoredSet(model.predict(X[val]), y[val]))
        stop = monitor.update(val_auc)
        if monitor.improved:
            best_state = model.state_dict()
        logger.debug(format_record(epoch=epoch, val_auc=val_auc))
        if stop:
            break

    model.load_state_dict(best_state)
    result = NodeClassificationResult(
        test_auc=auc_roc(ScoredSet(model.predict(X[test]), y[test])),
        val_auc=monitor.best_value,
        best_epoch=monitor.best_epoch if has_val else epochs,
        epochs=epochs,
    )
    logger.info(result.to_record())
    return result
