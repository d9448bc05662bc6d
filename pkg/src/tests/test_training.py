"""Tests for the loss, the optimizer, early stopping and the training loop."""

from dataclasses import replace

import numpy as np
import pytest

from graph import build_graph, transductive_split
from model import TipGnn, TipGnnConfig
from tensor import Tensor, scale
from training import Adam, EarlyStopMonitor, TrainConfig, fit, link_loss
from utils.errors import CheckpointError, ConfigError, NumericalError, TrainingError

TINY = TipGnnConfig(d=8, d_t=8, layers=1, steps=1, mlp_depth=1, heads=2, neighbors=4, dropout=0.0,
                    node_feature_mode="learned")


def _random_graph(num_nodes=10, num_edges=60, seed=0):
    rng = np.random.default_rng(seed)
    return build_graph([
        (f"n{int(rng.integers(num_nodes))}", f"n{int(rng.integers(num_nodes))}", float(t))
        for t in range(num_edges)
    ])


def _tiny_train_config(**overrides):
    base = TrainConfig(lr=1e-3, batch_size=20, max_epochs=2, patience=5, chunk_size=20, quiet=True)
    return replace(base, **overrides)


def _pair_graph():
    """Two nodes interacting four times."""
    return build_graph([("a", "b", float(t)) for t in (1, 2, 3, 4)])


# ----------------------------------------------------------------------
# optimizer

def test_adam_first_steps_by_hand():
    """With a constant unit gradient each step moves the parameter by ~lr."""
    p = Tensor(np.array([1.0]), requires_grad=True)
    opt = Adam([("p", p)], lr=0.1)
    p.grad = np.array([1.0])
    opt.step()
    assert p.data[0] == pytest.approx(0.9, abs=1e-7)
    p.grad = np.array([1.0])
    opt.step()
    assert p.data[0] == pytest.approx(0.8, abs=1e-7)
    assert opt.step_count == 2


def test_adam_zero_gradient_is_a_fixed_point():
    """Zero gradients without weight decay leave parameters unchanged."""
    p = Tensor(np.array([0.3, -2.0]), requires_grad=True)
    opt = Adam([("p", p)], lr=0.1)
    opt.zero_grad()
    opt.step()
    np.testing.assert_array_equal(p.data, [0.3, -2.0])


def test_adam_weight_decay_shrinks_parameters():
    """With zero gradients, weight decay pulls every coordinate towards 0."""
    p = Tensor(np.array([0.5, -0.5]), requires_grad=True)
    opt = Adam([("p", p)], lr=0.01, weight_decay=0.1)
    for _ in range(3):
        opt.zero_grad()
        opt.step()
    assert np.all(np.abs(p.data) < 0.5)


def test_adam_rejects_non_finite_gradient_without_updating():
    """A NaN gradient raises and leaves parameters and moments untouched."""
    a = Tensor(np.array([1.0]), requires_grad=True)
    b = Tensor(np.array([2.0]), requires_grad=True)
    opt = Adam([("a", a), ("b", b)], lr=0.1)
    a.grad = np.array([1.0])
    b.grad = np.array([np.nan])
    with pytest.raises(NumericalError):
        opt.step()
    assert a.data[0] == 1.0 and b.data[0] == 2.0
    assert opt.step_count == 0
    assert opt.m["a"][0] == 0.0


def test_adam_validation_and_state_mismatch():
    """Bad hyperparameters and foreign moments are rejected."""
    p = Tensor(np.zeros(2), requires_grad=True)
    with pytest.raises(ConfigError):
        Adam([("p", p)], lr=0.0)
    opt = Adam([("p", p)])
    with pytest.raises(CheckpointError):
        opt.load_state_dict({"step": 1, "m": {"q": np.zeros(2)}, "v": {"q": np.zeros(2)}})


# ----------------------------------------------------------------------
# loss

def test_loss_with_uninformative_model_is_two_log_two():
    """p = 0.5 everywhere gives -(ln 0.5 + ln 0.5) per positive."""
    g = _pair_graph()
    model = TipGnn.for_graph(TINY, g)
    for p in model.parameters():
        p.data = np.zeros_like(p.data)
    loss = link_loss(model, g, [0, 0], [1, 1], [2.5, 3.5], negatives=np.array([0, 1]))
    assert loss.item() == pytest.approx(2 * np.log(2))


def test_loss_with_several_negatives_per_positive():
    """Each extra negative adds one ln 2 term at p = 0.5."""
    g = _pair_graph()
    model = TipGnn.for_graph(TINY, g)
    for p in model.parameters():
        p.data = np.zeros_like(p.data)
    loss = link_loss(model, g, [0], [1], [2.5], negatives=np.array([[0, 1, 0]]))
    assert loss.item() == pytest.approx(4 * np.log(2))


def test_loss_rejects_empty_batch():
    """An empty batch is a training error."""
    g = _pair_graph()
    with pytest.raises(TrainingError):
        link_loss(TipGnn.for_graph(TINY, g), g, [], [], [], negatives=np.array([]))


def test_chunked_gradients_equal_full_batch_gradients():
    """Share-weighted chunk losses accumulate to the full-batch gradient."""
    g = _random_graph()
    model = TipGnn.for_graph(TINY, g, seed=2).eval()
    src, dst, times = g.src[30:36], g.dst[30:36], g.ts[30:36]
    negatives = np.random.default_rng(0).integers(g.num_nodes, size=6)

    model.zero_grad()
    link_loss(model, g, src, dst, times, negatives=negatives).backward()
    full = {name: p.grad.copy() for name, p in model.named_parameters()}

    model.zero_grad()
    for sl in (slice(0, 4), slice(4, 6)):
        share = len(src[sl]) / len(src)
        scale(link_loss(model, g, src[sl], dst[sl], times[sl], negatives=negatives[sl]), share).backward()
    for name, p in model.named_parameters():
        np.testing.assert_allclose(p.grad, full[name], atol=1e-12, err_msg=name)


def _overfit_setup():
    g = _pair_graph()
    a, b = g.node_id("a"), g.node_id("b")
    model = TipGnn.for_graph(TINY, g, seed=0)
    batch = (np.full(4, a), np.full(4, b), np.array([1.5, 2.5, 3.5, 4.5]))
    return g, model, batch, np.full(4, a)


def test_first_adam_steps_decrease_the_loss():
    """On a frozen batch the loss does not increase over the first five steps."""
    g, model, (src, dst, times), negatives = _overfit_setup()
    opt = Adam(model.named_parameters(), lr=1e-3, weight_decay=0.0)
    losses = []
    for _ in range(6):
        opt.zero_grad()
        loss = link_loss(model, g, src, dst, times, negatives=negatives)
        loss.backward()
        losses.append(loss.item())
        opt.step()
    assert all(later <= earlier + 1e-9 for earlier, later in zip(losses, losses[1:]))


def test_overfits_a_tiny_graph():
    """A two-node graph is fit to near-zero loss within 500 steps."""
    g, model, (src, dst, times), negatives = _overfit_setup()
    opt = Adam(model.named_parameters(), lr=0.01, weight_decay=0.0)
    loss_value = np.inf
    for _ in range(500):
        opt.zero_grad()
        loss = link_loss(model, g, src, dst, times, negatives=negatives)
        loss.backward()
        loss_value = loss.item()
        if loss_value < 0.05:
            break
        opt.step()
    assert loss_value < 0.05


# ----------------------------------------------------------------------
# early stopping

def test_patience_arithmetic():
    """Three epochs without improvement after the best one trigger the stop."""
    monitor = EarlyStopMonitor(patience=3)
    stops = [monitor.update(v) for v in [0.70, 0.80, 0.79, 0.78, 0.77]]
    assert stops == [False, False, False, False, True]
    assert monitor.best_epoch == 2
    assert monitor.best_value == 0.80


def test_monotone_metric_never_stops():
    """A strictly improving metric keeps the counter at zero."""
    monitor = EarlyStopMonitor(patience=1)
    assert not any(monitor.update(v) for v in np.linspace(0.5, 0.9, 20))
    assert monitor.best_epoch == 20
    assert monitor.improved


def test_tolerance_ignores_tiny_gains():
    """Gains within the tolerance count as no improvement."""
    monitor = EarlyStopMonitor(patience=2, tolerance=0.01)
    monitor.update(0.80)
    assert not monitor.update(0.805)
    assert monitor.update(0.809)
    assert monitor.best_epoch == 1


# ----------------------------------------------------------------------
# fit

def test_fit_runs_to_max_epochs_and_reports():
    """Every epoch is recorded; the best epoch carries the best validation AUC."""
    g = _random_graph()
    split = transductive_split(g)
    model = TipGnn.for_graph(TINY, g, seed=1)
    seen = []
    report = fit(model, g, split, _tiny_train_config(), on_epoch=seen.append)
    assert len(report.epochs) == 2
    assert [r.epoch for r in seen] == [1, 2]
    assert report.hit_max_epochs
    aucs = [e.val_auc for e in report.epochs]
    assert report.best_val_auc == max(aucs)
    assert report.best_epoch == aucs.index(max(aucs)) + 1
    assert all(np.isfinite(report.losses))
    assert report.optimizer_state is not None
    assert not model.training
    assert "val_auc=" in report.epochs[0].to_record()


def test_fit_is_deterministic():
    """Same seeds, same data: identical losses and validation scores."""
    g = _random_graph(seed=3)
    reports = []
    for _ in range(2):
        model = TipGnn.for_graph(TINY, g, seed=5)
        reports.append(fit(model, g, transductive_split(g), _tiny_train_config(seed=5)))
    assert reports[0].losses == reports[1].losses
    assert [e.val_auc for e in reports[0].epochs] == [e.val_auc for e in reports[1].epochs]


def test_fit_rejects_training_positions_past_the_boundary():
    """A training interaction from the validation range is a leak."""
    g = _random_graph()
    split = transductive_split(g)
    leaky = replace(split, train=np.append(split.train, split.train_boundary))
    with pytest.raises(TrainingError):
        fit(TipGnn.for_graph(TINY, g), g, leaky, _tiny_train_config())


def test_fit_without_validation_keeps_the_last_epoch():
    """An empty validation set disables early stopping."""
    g = _random_graph()
    split = replace(transductive_split(g), val=np.array([], dtype=np.int64))
    report = fit(TipGnn.for_graph(TINY, g), g, split, _tiny_train_config(max_epochs=3, patience=1))
    assert len(report.epochs) == 3
    assert report.best_epoch == 3
    assert report.best_val_auc is None
    assert all(e.val_auc is None for e in report.epochs)
