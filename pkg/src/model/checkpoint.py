"""Self-describing model checkpoints (.npz with a JSON metadata entry)."""

import json
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np

from utils.config import Config
from utils.errors import CheckpointError
from utils.logger import get_logger
from .config import TipGnnConfig
from .tip_gnn import TipGnn

logger = get_logger(__name__)

META_KEY = "__meta__"
PARAM_PREFIX = "param/"
MOMENT_PREFIXES = {"m": "adam_m/", "v": "adam_v/"}


def _little_endian(array: np.ndarray) -> np.ndarray:
    array = np.asarray(array)
    return array.astype(array.dtype.newbyteorder("<"), copy=False)


def save_checkpoint(
    path: Path,
    model: TipGnn,
    optimizer_state: Optional[Dict[str, Any]] = None,
    extra: Optional[Dict[str, Any]] = None,
) -> Path:
    """
    Write config, parameter names/shapes and buffers (little-endian).

    Args:
        optimizer_state: Adam state_dict() to store alongside the parameters
        extra: JSON-serializable metadata (e.g. seed, best epoch)

    Returns:
        The written path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    state = model.state_dict()
    meta = {
        "version": Config.CHECKPOINT_VERSION,
        "config": model.config.to_dict(),
        "num_nodes": model.num_nodes,
        "node_dim": model.node_dim,
        "timespan": model.timespan,
        "seed": model.seed,
        "parameters": {name: list(array.shape) for name, array in state.items()},
        "optimizer_step": None if optimizer_state is None else int(optimizer_state["step"]),
        "extra": extra or {},
    }
    arrays = {PARAM_PREFIX + name: _little_endian(array) for name, array in state.items()}
    if optimizer_state is not None:
        for key, prefix in MOMENT_PREFIXES.items():
            for name, array in optimizer_state[key].items():
                arrays[prefix + name] = _little_endian(array)
    arrays[META_KEY] = np.frombuffer(json.dumps(meta).encode("utf-8"), dtype=np.uint8)

    with open(path, "wb") as f:
        np.savez(f, **arrays)
    logger.info("saved checkpoint %s (%d parameters)", path, model.parameter_count())
    return path


def load_checkpoint(path: Path, cache=None) -> Tuple[TipGnn, Optional[Dict[str, Any]], Dict[str, Any]]:
    """
    Rebuild a model from a checkpoint.

    Returns:
        (model in eval mode, optimizer state or None, metadata)

    Raises:
        CheckpointError: Unreadable file, version mismatch or shape mismatch
    """
    path = Path(path)
    try:
        with np.load(path, allow_pickle=False) as data:
            arrays = {key: data[key] for key in data.files}
    except (OSError, ValueError) as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    if META_KEY not in arrays:
        raise CheckpointError(f"{path} has no metadata entry")
    meta = json.loads(arrays.pop(META_KEY).tobytes().decode("utf-8"))
    if meta.get("version") != Config.CHECKPOINT_VERSION:
        raise CheckpointError(
            f"checkpoint version {meta.get('version')} is not supported (expected {Config.CHECKPOINT_VERSION})"
        )

    config = TipGnnConfig(**meta["config"])
    model = TipGnn(
        config,
        num_nodes=meta["num_nodes"],
        node_dim=meta["node_dim"],
        timespan=meta["timespan"],
        seed=meta["seed"],
        cache=cache,
    )
    state = {key[len(PARAM_PREFIX):]: arr for key, arr in arrays.items() if key.startswith(PARAM_PREFIX)}
    for name, shape in meta["parameters"].items():
        if name in state and list(state[name].shape) != shape:
            raise CheckpointError(f"{name}: stored shape {list(state[name].shape)} != declared {shape}")
    model.load_state_dict(state)
    model.eval()

    optimizer_state = None
    if meta.get("optimizer_step") is not None:
        optimizer_state = {"step": meta["optimizer_step"]}
        for key, prefix in MOMENT_PREFIXES.items():
            optimizer_state[key] = {k[len(prefix):]: arr for k, arr in arrays.items() if k.startswith(prefix)}
    return model, optimizer_state, meta
