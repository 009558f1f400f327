"""CSV datasets, model files and result tables.

Model files are UTF-8 JSON. Every float is written with Python's shortest
round-trip ``repr``, so ``load_model(save_model(net))`` restores bit-identical
arrays. Arrays are stored flat next to an explicit ``shape``.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .network import Activation, LayerParams, SampledNetwork

FORMAT_NAME = "swimnet-model"
FORMAT_VERSION = 1
RESULTS_HEADER = ["method", "depth", "width", "seed", "metric", "value", "fit_seconds"]

_MISSING = {"", "na", "nan", "null", "none", "?"}


class CsvFormatError(ValueError):
    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.row = row
        self.column = column


class ModelFormatError(ValueError):
    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message if offset is None else f"{message} (at offset {offset})")
        self.offset = offset


@dataclass
class CsvSchema:
    """How to split a CSV file into features and targets.

    ``target_columns`` entries are header names or integer positions
    (negative positions count from the right). All other columns are features.
    """

    target_columns: Sequence[str | int] = (-1,)
    has_header: bool = True
    label_mode: str = "categorical"

    def __post_init__(self):
        if self.label_mode not in ("categorical", "numeric"):
            raise ValueError(f"label_mode must be 'categorical' or 'numeric', got {self.label_mode!r}")
        if not len(self.target_columns):
            raise ValueError("at least one target column is required")
        if self.label_mode == "categorical" and len(self.target_columns) != 1:
            raise ValueError("categorical mode takes exactly one target column")


@dataclass
class Dataset:
    X: np.ndarray
    Y: np.ndarray
    feature_names: list[str]
    target_names: list[str]
    labels: list[str] | None = None
    raw_labels: list[str] | None = field(default=None, repr=False)

    @property
    def class_indices(self) -> np.ndarray:
        if self.labels is None:
            raise ValueError("dataset has numeric targets")
        return np.argmax(self.Y, axis=1)


def _resolve_column(spec, names: list[str]) -> int:
    if isinstance(spec, (int, np.integer)) or (isinstance(spec, str) and spec.lstrip("-").isdigit()
                                               and spec not in names):
        pos = int(spec)
        if not -len(names) <= pos < len(names):
            raise CsvFormatError(f"column index out of range for {len(names)} columns", column=str(spec))
        return pos % len(names)
    if spec not in names:
        raise CsvFormatError("unknown target column", column=str(spec))
    return names.index(spec)


def _read_rows(path) -> list[list[str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return [row for row in csv.reader(fh) if row and not (len(row) == 1 and not row[0].strip())]


def load_csv(path, schema: CsvSchema | None = None, *, impute_median: bool = False) -> Dataset:
    """Parse a comma-separated file into a :class:`Dataset`.

    Parsing is strict: ragged rows, empty or non-numeric feature cells and
    unknown target columns raise :class:`CsvFormatError` with the 1-based data
    row and the column name. ``impute_median=True`` fills missing feature
    cells with the column median instead.

    Categorical targets become one-hot rows; the label dictionary keeps the
    order in which labels first appear.
    """
    schema = schema or CsvSchema()
    rows = _read_rows(path)
    if schema.has_header:
        if not rows:
            raise CsvFormatError("file is empty")
        names = [c.strip() for c in rows[0]]
        rows = rows[1:]
    else:
        width = len(rows[0]) if rows else 0
        names = [str(k) for k in range(width)]
    if not rows:
        raise CsvFormatError("no data rows")

    target_idx = [_resolve_column(t, names) for t in schema.target_columns]
    if len(set(target_idx)) != len(target_idx):
        raise CsvFormatError("target column listed twice")
    feature_idx = [k for k in range(len(names)) if k not in target_idx]
    if not feature_idx:
        raise CsvFormatError("no feature columns left after removing targets")

    X = np.empty((len(rows), len(feature_idx)))
    missing = np.zeros(X.shape, dtype=bool)
    raw_targets = []
    for r, row in enumerate(rows, start=1):
        if len(row) != len(names):
            raise CsvFormatError(f"expected {len(names)} fields, found {len(row)}", row=r)
        for j, k in enumerate(feature_idx):
            cell = row[k].strip()
            if cell.lower() in _MISSING:
                if not impute_median:
                    raise CsvFormatError("missing value", row=r, column=names[k])
                missing[r - 1, j] = True
                continue
            try:
                value = float(cell)
            except ValueError:
                raise CsvFormatError(f"non-numeric value {cell!r}", row=r, column=names[k]) from None
            if not math.isfinite(value):
                raise CsvFormatError(f"non-finite value {cell!r}", row=r, column=names[k])
            X[r - 1, j] = value
        raw_targets.append([row[k].strip() for k in target_idx])

    if missing.any():
        for j in np.flatnonzero(missing.any(axis=0)):
            present = X[~missing[:, j], j]
            if present.size == 0:
                raise CsvFormatError("column has no values to impute from", column=names[feature_idx[j]])
            X[missing[:, j], j] = np.median(present)

    target_names = [names[k] for k in target_idx]
    if schema.label_mode == "categorical":
        raw = [t[0] for t in raw_targets]
        for r, lab in enumerate(raw, start=1):
            if lab.lower() in _MISSING:
                raise CsvFormatError("missing label", row=r, column=target_names[0])
        labels = list(dict.fromkeys(raw))
        lookup = {lab: k for k, lab in enumerate(labels)}
        Y = np.zeros((len(raw), len(labels)))
        Y[np.arange(len(raw)), [lookup[lab] for lab in raw]] = 1.0
        return Dataset(X, Y, [names[k] for k in feature_idx], target_names, labels, raw)

    Y = np.empty((len(rows), len(target_idx)))
    for r, vals in enumerate(raw_targets, start=1):
        for j, cell in enumerate(vals):
            try:
                Y[r - 1, j] = float(cell)
            except ValueError:
                raise CsvFormatError(f"non-numeric target {cell!r}", row=r, column=target_names[j]) from None
            if not math.isfinite(Y[r - 1, j]):
                raise CsvFormatError(f"non-finite target {cell!r}", row=r, column=target_names[j])
    return Dataset(X, Y, [names[k] for k in feature_idx], target_names)


def _pack(a: np.ndarray, what: str) -> dict:
    a = np.asarray(a, dtype=np.float64)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{what} contains non-finite values")
    return {"shape": list(a.shape), "data": a.ravel().tolist()}


def _unpack(obj, what: str) -> np.ndarray:
    try:
        shape = tuple(int(n) for n in obj["shape"])
        data = np.asarray(obj["data"], dtype=np.float64)
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"{what}: malformed array ({exc})") from None
    if data.ndim != 1 or data.size != math.prod(shape):
        raise ModelFormatError(f"{what}: {data.size} values do not fill shape {shape}")
    if not np.all(np.isfinite(data)):
        raise ModelFormatError(f"{what}: non-finite values")
    return data.reshape(shape)


def model_to_dict(net: SampledNetwork) -> dict:
    if not net.is_trained:
        raise ValueError("cannot save a network without an output layer")
    return {
        "format": FORMAT_NAME,
        "format_version": FORMAT_VERSION,
        "input_dim": net.input_dim,
        "activation": {"kind": net.activation.kind, "s1": net.activation.s1, "s2": net.activation.s2},
        "hidden": [
            {"weights": _pack(layer.weights, f"layer {l} weights"), "biases": _pack(layer.biases, f"layer {l} biases")}
            for l, layer in enumerate(net.hidden, start=1)
        ],
        "output": {"weights": _pack(net.output_weights, "output weights"),
                   "biases": _pack(net.output_bias, "output biases")},
        "seed": net.seed,
        "config": net.config,
        "labels": net.labels,
        "train_residual_norm": net.train_residual_norm,
    }


def save_model(net: SampledNetwork, path) -> None:
    text = json.dumps(model_to_dict(net), allow_nan=False, indent=1)
    Path(path).write_text(text + "\n", encoding="utf-8")


def _reject_constant(name):
    raise ModelFormatError(f"non-finite literal {name}")


def model_from_dict(doc) -> SampledNetwork:
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise ModelFormatError("not a swimnet model file")
    if doc.get("format_version") != FORMAT_VERSION:
        raise ModelFormatError(
            f"unsupported format version {doc.get('format_version')!r}; expected {FORMAT_VERSION}"
        )
    try:
        act_doc = doc["activation"]
        act = Activation(act_doc["kind"], float(act_doc["s1"]), float(act_doc["s2"]))
        input_dim = int(doc["input_dim"])
        hidden_docs = doc["hidden"]
        out_doc = doc["output"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"missing or invalid field: {exc}") from None

    hidden, prev = [], input_dim
    for l, layer in enumerate(hidden_docs, start=1):
        W = _unpack(layer.get("weights"), f"layer {l} weights")
        b = _unpack(layer.get("biases"), f"layer {l} biases")
        if W.ndim != 2 or W.shape[1] != prev:
            raise ModelFormatError(
                f"layer {l} weights have shape {W.shape} but layer {l - 1} provides {prev} values"
            )
        if b.shape != (W.shape[0],):
            raise ModelFormatError(f"layer {l} biases have shape {b.shape}, expected ({W.shape[0]},)")
        try:
            hidden.append(LayerParams(W, b))
        except ValueError as exc:
            raise ModelFormatError(f"layer {l}: {exc}") from None
        prev = W.shape[0]
    W_out = _unpack(out_doc.get("weights"), "output weights")
    b_out = _unpack(out_doc.get("biases"), "output biases")
    if W_out.ndim != 2 or W_out.shape[1] != prev:
        raise ModelFormatError(
            f"output weights have shape {W_out.shape} but layer {len(hidden)} provides {prev} values"
        )
    if b_out.shape != (W_out.shape[0],):
        raise ModelFormatError(f"output biases have shape {b_out.shape}, expected ({W_out.shape[0]},)")
    return SampledNetwork(
        input_dim=input_dim,
        hidden=hidden,
        activation=act,
        output_weights=W_out,
        output_bias=b_out,
        seed=doc.get("seed"),
        config=doc.get("config") or {},
        labels=doc.get("labels"),
        train_residual_norm=doc.get("train_residual_norm"),
    )


def load_model(path) -> SampledNetwork:
    text = Path(path).read_text(encoding="utf-8")
    try:
        doc = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"corrupt or truncated model file: {exc.msg}", offset=exc.pos) from None
    return model_from_dict(doc)


def write_results(rows: Iterable, path) -> None:
    """Write experiment rows (objects with the result attributes) as CSV."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(RESULTS_HEADER)
        for row in rows:
            w.writerow([row.method, row.depth, row.width, row.seed, row.metric,
                        repr(float(row.value)), repr(float(row.fit_seconds))])


def read_results(path) -> list[dict]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != RESULTS_HEADER:
            raise CsvFormatError(f"results header {reader.fieldnames} != {RESULTS_HEADER}")
        out = []
        for rec in reader:
            out.append({
                "method": rec["method"],
                "depth": int(rec["depth"]),
                "width": int(rec["width"]),
                "seed": int(rec["seed"]),
                "metric": rec["metric"],
                "value": float(rec["value"]),
                "fit_seconds": float(rec["fit_seconds"]),
            })
        return out


def load_features(path, *, has_header: bool = True, columns: Sequence[str] | None = None) -> np.ndarray:
    """Read a feature-only matrix, optionally selecting ``columns`` by name.

    If ``columns`` is given but the header lacks any of them, every column is
    used and the caller is left to check the width.
    """
    rows = _read_rows(path)
    if has_header:
        if not rows:
            raise CsvFormatError("file is empty")
        names = [c.strip() for c in rows[0]]
        rows = rows[1:]
    else:
        names = [str(k) for k in range(len(rows[0]))] if rows else []
    if not rows:
        raise CsvFormatError("no data rows")
    if has_header and columns is not None and all(c in names for c in columns):
        idx = [names.index(c) for c in columns]
    else:
        idx = list(range(len(names)))
    X = np.empty((len(rows), len(idx)))
    for r, row in enumerate(rows, start=1):
        if len(row) != len(names):
            raise CsvFormatError(f"expected {len(names)} fields, found {len(row)}", row=r)
        for j, k in enumerate(idx):
            cell = row[k].strip()
            try:
                X[r - 1, j] = float(cell)
            except ValueError:
                raise CsvFormatError(f"non-numeric value {cell!r}", row=r, column=names[k]) from None
            if not math.isfinite(X[r - 1, j]):
                raise CsvFormatError(f"non-finite value {cell!r}", row=r, column=names[k])
    return X
