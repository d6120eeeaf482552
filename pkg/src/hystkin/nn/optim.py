"""Adam optimizer operating on a ParameterStore's flat buffers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..exceptions import NumericsError
from .params import ParameterStore


@dataclass
class AdamConfig:
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step_count: int = 0

    def __post_init__(self):
        if self.lr < 0.0:
            raise ValueError(f"lr must be >= 0, got {self.lr}")
        if not (0.0 < self.beta1 < 1.0 and 0.0 < self.beta2 < 1.0):
            raise ValueError(f"betas must lie in (0, 1), got {self.beta1}, {self.beta2}")
        if self.step_count < 0:
            raise ValueError(f"step_count must be >= 0, got {self.step_count}")


def adam_step(store: ParameterStore, cfg: AdamConfig):
    """Bias-corrected Adam update; zeroes gradients afterwards."""
    g = store.grad
    if not np.all(np.isfinite(g)):
        raise NumericsError("non-finite gradient passed to adam_step")
    cfg.step_count += 1
    t = cfg.step_count
    m, v = store.m, store.v
    np.multiply(m, cfg.beta1, out=m)
    m += (1.0 - cfg.beta1) * g
    np.multiply(v, cfg.beta2, out=v)
    v += (1.0 - cfg.beta2) * np.square(g)
    m_hat = m / (1.0 - cfg.beta1 ** t)
    v_hat = v / (1.0 - cfg.beta2 ** t)
    store.value -= cfg.lr * m_hat / (np.sqrt(v_hat) + cfg.eps)
    store.zero_grad()
