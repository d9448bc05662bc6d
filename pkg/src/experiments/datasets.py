"""Dataset files: edge lists, CSV with edge features, node features, labels."""

import re
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np

from graph.temporal_graph import EdgeRecord, TemporalGraph, build_graph
from utils.errors import DatasetError
from utils.logger import get_logger
from .config import DATASET_FORMATS

logger = get_logger(__name__)

_SEPARATORS = re.compile(r"[,\s]+")
_HEADER_PREFIXES = ("%", "#")


def _data_lines(path: Path):
    """Yield (line number, fields) for every non-header, non-blank line."""
    path = Path(path)
    try:
        handle = open(path, encoding="utf-8")
    except OSError as exc:
        raise DatasetError(f"cannot read {path}: {exc}") from exc
    with handle:
        for number, raw in enumerate(handle, 1):
            line = raw.strip()
            if not line or line.startswith(_HEADER_PREFIXES):
                continue
            yield number, [f for f in _SEPARATORS.split(line) if f]


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _floats(values: List[str], number: int, what: str) -> List[float]:
    try:
        return [float(v) for v in values]
    except ValueError:
        raise DatasetError(f"non-numeric {what} in {values}", line=number) from None


def read_edge_records(path: Path, format: str = "edge_list", has_weight: bool = True) -> List[EdgeRecord]:
    """
    Parse interaction lines into EdgeRecords (one per data line, file order).

    edge_list: a 3-field line is always `src dst timestamp`. Longer lines are
    `src dst weight timestamp [feat ...]` when has_weight is set (the weight is
    checked to be numeric, then ignored) and `src dst timestamp [feat ...]`
    otherwise. csv_with_features: `src,dst,timestamp[,feat ...]` with an
    optional header row; has_weight does not apply.

    Raises:
        DatasetError: Unknown format, malformed line (with its number), empty file
    """
    if format not in DATASET_FORMATS:
        raise DatasetError(f"unknown dataset format {format!r}; expected one of {DATASET_FORMATS}")
    records: List[EdgeRecord] = []
    for number, parts in _data_lines(path):
        if len(parts) < 3:
            raise DatasetError(f"expected at least 3 fields, got {len(parts)}", line=number, record=parts)
        if format == "csv_with_features" and not records and not _is_number(parts[2]):
            continue  # header row
        if format == "csv_with_features" or len(parts) == 3 or not has_weight:
            t_field, feat_fields = parts[2], parts[3:]
        else:
            _floats(parts[2:3], number, "weight")
            t_field, feat_fields = parts[3], parts[4:]
        t = _floats([t_field], number, "timestamp")[0]
        feat = _floats(feat_fields, number, "edge feature") if feat_fields else None
        records.append(EdgeRecord(src=parts[0], dst=parts[1], t=t, feat=feat, line=number))
    if not records:
        raise DatasetError(f"{path} contains no interactions")
    return records


def read_node_features(path: Path) -> Dict[str, List[float]]:
    """`node_id, feat_1 .. feat_d` per line; a non-numeric first row is a header."""
    table: Dict[str, List[float]] = {}
    for number, parts in _data_lines(path):
        if not table and len(parts) > 1 and not all(_is_number(p) for p in parts[1:]):
            continue
        if len(parts) < 2:
            raise DatasetError("node feature line needs an id and at least one value", line=number)
        table[parts[0]] = _floats(parts[1:], number, "node feature")
    if not table:
        raise DatasetError(f"{path} contains no node features")
    return table


def read_labels(path: Path) -> np.ndarray:
    """One 0/1 label per data line, in dataset file order."""
    labels = []
    for number, parts in _data_lines(path):
        value = parts[-1]
        if value not in ("0", "1"):
            raise DatasetError(f"label must be 0 or 1, got {value!r}", line=number)
        labels.append(int(value))
    if not labels:
        raise DatasetError(f"{path} contains no labels")
    return np.asarray(labels, dtype=np.int64)


def labels_by_position(g: TemporalGraph, labels: np.ndarray) -> np.ndarray:
    """Reorder file-order labels to the graph's chronological positions."""
    labels = np.asarray(labels, dtype=np.int64)
    if len(labels) != g.num_edges:
        raise DatasetError(f"{len(labels)} labels for {g.num_edges} interactions")
    return labels[g.input_order]


def parse_dataset(
    path: Path,
    format: str = "edge_list",
    node_features: Optional[Path] = None,
    has_weight: bool = True,
) -> TemporalGraph:
    """
    Read a dataset file (plus optional node features) into a TemporalGraph.

    Raises:
        DatasetError: Malformed input, naming the line when known
    """
    records = read_edge_records(path, format, has_weight)
    node_feats = read_node_features(node_features) if node_features else None
    g = build_graph(records, node_feats=node_feats)
    logger.info("loaded %s: %r", path, g)
    return g
