"""Minimal dense numerical core: layers with hand-derived gradients,
MSE loss, Adam, and a finite-difference gradient checker.

Everything is float64 and deterministic given an explicit PCG64 generator.
"""

from .gradcheck import grad_check
from .layers import Linear, LSTMCell, linear_backward, linear_forward, relu, relu_backward, sigmoid
from .losses import mse_loss, weighted_mse_loss
from .optim import AdamConfig, adam_step
from .params import Param, ParameterStore

__all__ = [
    "AdamConfig",
    "LSTMCell",
    "Linear",
    "Param",
    "ParameterStore",
    "adam_step",
    "grad_check",
    "linear_backward",
    "linear_forward",
    "mse_loss",
    "relu",
    "relu_backward",
    "sigmoid",
    "weighted_mse_loss",
]
