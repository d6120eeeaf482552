"""Regression losses returning (value, gradient-wrt-prediction)."""

from __future__ import annotations

import numpy as np


def mse_loss(pred: np.ndarray, target: np.ndarray):
    """Mean squared error over all entries."""
    if pred.shape != target.shape:
        raise ValueError(f"shape mismatch: pred {pred.shape} vs target {target.shape}")
    diff = pred - target
    n = diff.size
    return float(np.dot(diff.ravel(), diff.ravel()) / n), (2.0 / n) * diff


def weighted_mse_loss(pred: np.ndarray, target: np.ndarray, weight: np.ndarray):
    """MSE over entries with weight > 0; used to mask padded sequence slots."""
    if pred.shape != target.shape or pred.shape != weight.shape:
        raise ValueError(
            f"shape mismatch: pred {pred.shape}, target {target.shape}, weight {weight.shape}")
    total = float(weight.sum())
    if total <= 0.0:
        raise ValueError("weighted_mse_loss needs at least one positive weight")
    diff = (pred - target) * weight
    return float(np.dot(diff.ravel(), (pred - target).ravel()) / total), (2.0 / total) * diff
