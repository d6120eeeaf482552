"""Text persistence for series and trained models.

Both formats are plain UTF-8, deterministic, and round-trip exact: floats
are written with Python's shortest round-trip repr, so load(save(x))
reproduces bit-identical values.
"""

from __future__ import annotations

import ast
from pathlib import Path

import numpy as np

from .datasets import Direction
from .estimators import TrainedModel, make_estimator
from .exceptions import FormatError
from .series import CHANNEL_NAMES, KinematicSeries

#: Max deviation from a uniform time grid accepted on load (seconds).
DT_UNIFORM_TOL_S = 1e-9

MODEL_MAGIC = "hystkin model v1"


def save_series(path, series: KinematicSeries):
    """Write a series as CSV: header line, then t_s plus channel columns."""
    names = [c for c in CHANNEL_NAMES if series.has(c)]
    cols = [series[c] for c in names]
    t = series.t
    lines = ["t_s," + ",".join(names)]
    for k in range(len(series)):
        lines.append(repr(float(t[k])) + "," + ",".join(repr(float(col[k])) for col in cols))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_series(path) -> KinematicSeries:
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise FormatError(f"{path}: empty file")
    header = [h.strip() for h in lines[0].split(",")]
    if header[0] != "t_s" or len(header) < 2:
        raise FormatError(f"{path}: line 1: expected header starting with 't_s', got {lines[0]!r}")
    for name in header[1:]:
        if name not in CHANNEL_NAMES:
            raise FormatError(f"{path}: line 1: unknown channel {name!r}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(header):
            raise FormatError(
                f"{path}: line {lineno}: expected {len(header)} fields, got {len(parts)}")
        try:
            rows.append([float(p) for p in parts])
        except ValueError as exc:
            raise FormatError(f"{path}: line {lineno}: {exc}") from None
    if len(rows) < 2:
        raise FormatError(f"{path}: need at least 2 data rows, got {len(rows)}")
    data = np.asarray(rows)
    t = data[:, 0]
    dt = (t[-1] - t[0]) / (len(t) - 1)
    if dt <= 0.0 or np.max(np.abs(np.diff(t) - dt)) > DT_UNIFORM_TOL_S:
        raise FormatError(f"{path}: time column is not uniformly spaced")
    channels = {name: np.ascontiguousarray(data[:, j + 1]) for j, name in enumerate(header[1:])}
    return KinematicSeries(dt_s=float(dt), channels=channels, t0_s=float(t[0]))


def save_model(path, model: TrainedModel, config_digest: str = ""):
    """Persist kind, direction, hyperparameters, scaler bounds and tensors."""
    est = model.estimator
    lines = [MODEL_MAGIC,
             f"kind = {model.kind}",
             f"direction = {model.direction.value}",
             f"config_digest = {config_digest}"]
    for name, value in sorted(est.get_params().items()):
        lines.append(f"param {name} = {value!r}")
    lines.append(f"x_bounds = {est.x_scaler_.min_!r} {est.x_scaler_.max_!r}")
    lines.append(f"y_bounds = {est.y_scaler_.min_!r} {est.y_scaler_.max_!r}")
    store = est.net_.store
    lines.append(f"tensors = {len(store.names())}")
    for name in store.names():
        value = np.atleast_2d(store[name].value)
        lines.append(f"tensor {name} {value.shape[0]} {value.shape[1]}")
        for row in value:
            lines.append(" ".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_model(path) -> TrainedModel:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != MODEL_MAGIC:
        raise FormatError(f"{path}: not a model file (expected {MODEL_MAGIC!r})")

    meta: dict[str, str] = {}
    params: dict[str, object] = {}
    i = 1
    while i < len(lines) and not lines[i].startswith("tensors "):
        line = lines[i]
        if "=" not in line:
            raise FormatError(f"{path}: line {i + 1}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key.startswith("param "):
            try:
                params[key[6:]] = ast.literal_eval(value)
            except (ValueError, SyntaxError):
                raise FormatError(f"{path}: line {i + 1}: bad parameter literal {value!r}") from None
        else:
            meta[key] = value
        i += 1
    if i >= len(lines):
        raise FormatError(f"{path}: missing 'tensors' section")
    declared = int(lines[i].split()[-1])
    i += 1

    tensors: dict[str, np.ndarray] = {}
    while i < len(lines) and lines[i].startswith("tensor "):
        try:
            _, name, rows_s, cols_s = lines[i].split()
            rows, cols = int(rows_s), int(cols_s)
        except ValueError:
            raise FormatError(f"{path}: line {i + 1}: bad tensor header {lines[i]!r}") from None
        block = lines[i + 1:i + 1 + rows]
        if len(block) != rows:
            raise FormatError(f"{path}: tensor {name!r}: expected {rows} rows")
        try:
            arr = np.array([[float(v) for v in row.split()] for row in block])
        except ValueError as exc:
            raise FormatError(f"{path}: tensor {name!r}: {exc}") from None
        if arr.shape != (rows, cols):
            raise FormatError(
                f"{path}: tensor {name!r}: declared {rows}x{cols} but parsed {arr.shape}")
        tensors[name] = arr
        i += 1 + rows
    if len(tensors) != declared:
        raise FormatError(f"{path}: declared {declared} tensors, found {len(tensors)}")

    for key in ("kind", "direction", "x_bounds", "y_bounds"):
        if key not in meta:
            raise FormatError(f"{path}: missing header field {key!r}")
    kind = meta["kind"]
    est = make_estimator(kind, **params)

    # Stored 2-D blocks map back onto the network's native (possibly 1-D) shapes.
    skeleton = est._build_net(np.random.Generator(np.random.PCG64(0)))
    shaped = {}
    for name in tensors:
        if name in skeleton.store.params:
            native = skeleton.store[name].shape
            if int(np.prod(native)) == tensors[name].size and len(native) == 1:
                shaped[name] = tensors[name].ravel()
            else:
                shaped[name] = tensors[name]
        else:
            shaped[name] = tensors[name]

    x_bounds = tuple(float(v) for v in meta["x_bounds"].split())
    y_bounds = tuple(float(v) for v in meta["y_bounds"].split())
    est._restore(shaped, x_bounds, y_bounds)
    return TrainedModel(kind=kind, direction=Direction.from_token(meta["direction"]), estimator=est)


def save_loss_curve(path, curve: np.ndarray):
    lines = ["epoch,mse"] + [f"{k},{repr(float(v))}" for k, v in enumerate(curve)]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
