"""Input validation helpers used by the public API surface."""

from __future__ import annotations

import numpy as np


def as_float_array(x, name: str, min_len: int = 1) -> np.ndarray:
    """Coerce to a finite 1-D float64 array, raising with the argument name."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size < min_len:
        raise ValueError(f"{name} must have at least {min_len} samples, got {arr.size}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def check_finite_scalar(value: float, name: str) -> float:
    v = float(value)
    if not np.isfinite(v):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return v


def check_positive(value: float, name: str) -> float:
    v = check_finite_scalar(value, name)
    if v <= 0.0:
        raise ValueError(f"{name} must be > 0, got {value!r}")
    return v


def check_nonnegative(value: float, name: str) -> float:
    v = check_finite_scalar(value, name)
    if v < 0.0:
        raise ValueError(f"{name} must be >= 0, got {value!r}")
    return v


def as_series_list(X, name: str) -> list[np.ndarray]:
    """Accept a single 1-D sequence or a list of them; return list of arrays."""
    if isinstance(X, np.ndarray) and X.ndim == 1:
        return [as_float_array(X, name)]
    if isinstance(X, (list, tuple)):
        if len(X) == 0:
            raise ValueError(f"{name} must contain at least one sequence")
        if all(np.isscalar(v) for v in X):
            return [as_float_array(X, name)]
        return [as_float_array(seq, f"{name}[{i}]") for i, seq in enumerate(X)]
    return [as_float_array(X, name)]
