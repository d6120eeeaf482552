"""Trainable parameters backed by one flat buffer per quantity.

Keeping value / grad / Adam moments in contiguous flat arrays makes the
optimizer step a handful of vector ops regardless of how many tensors a
network has; each named parameter is a reshaped view into those buffers.
"""

from __future__ import annotations

import numpy as np


class Param:
    """One named tensor with gradient and Adam moment views of equal shape."""

    __slots__ = ("name", "value", "grad", "m", "v")

    def __init__(self, name: str, value: np.ndarray):
        self.name = name
        self.value = value
        self.grad = np.zeros_like(value)
        self.m = np.zeros_like(value)
        self.v = np.zeros_like(value)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.value.shape

    def __repr__(self) -> str:
        return f"Param({self.name!r}, shape={self.value.shape})"


class ParameterStore:
    """Ordered collection of Params sharing flat float64 buffers.

    Usage: add() every parameter during network construction, then build()
    once. After build, Param arrays are views into .value/.grad/.m/.v.
    """

    def __init__(self):
        self.params: dict[str, Param] = {}
        self.value: np.ndarray | None = None
        self.grad: np.ndarray | None = None
        self.m: np.ndarray | None = None
        self.v: np.ndarray | None = None

    def add(self, name: str, init: np.ndarray) -> Param:
        if self.value is not None:
            raise RuntimeError("store already built; cannot add parameters")
        if name in self.params:
            raise ValueError(f"duplicate parameter name {name!r}")
        p = Param(name, np.ascontiguousarray(init, dtype=np.float64))
        self.params[name] = p
        return p

    def build(self) -> "ParameterStore":
        total = sum(p.value.size for p in self.params.values())
        self.value = np.empty(total)
        self.grad = np.zeros(total)
        self.m = np.zeros(total)
        self.v = np.zeros(total)
        offset = 0
        for p in self.params.values():
            n = p.value.size
            shape = p.value.shape
            self.value[offset:offset + n] = p.value.ravel()
            p.value = self.value[offset:offset + n].reshape(shape)
            p.grad = self.grad[offset:offset + n].reshape(shape)
            p.m = self.m[offset:offset + n].reshape(shape)
            p.v = self.v[offset:offset + n].reshape(shape)
            offset += n
        return self

    @property
    def n_params(self) -> int:
        if self.value is not None:
            return self.value.size
        return sum(p.value.size for p in self.params.values())

    def zero_grad(self):
        self.grad.fill(0.0)

    def __getitem__(self, name: str) -> Param:
        return self.params[name]

    def names(self) -> list[str]:
        return list(self.params)


def uniform_init(rng: np.random.Generator, fan_in: int, shape: tuple[int, ...]) -> np.ndarray:
    """Uniform in +-sqrt(1/fan_in), the default weight initialization."""
    bound = np.sqrt(1.0 / fan_in)
    return rng.uniform(-bound, bound, size=shape)
