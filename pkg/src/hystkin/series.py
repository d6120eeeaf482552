"""Uniformly sampled kinematic time series."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .validation import as_float_array, check_positive

#: Canonical column order for persisted series.
CHANNEL_NAMES = ("q_cmd_mm", "q_act_mm", "theta_deg", "tension_N")


@dataclass
class KinematicSeries:
    """Named channels sampled on a shared uniform time grid.

    Channels are a subset of :data:`CHANNEL_NAMES`; all present channels
    must have the same length (>= 2).
    """

    dt_s: float
    channels: dict[str, np.ndarray]
    t0_s: float = 0.0
    _n: int = field(init=False, repr=False)

    def __post_init__(self):
        check_positive(self.dt_s, "dt_s")
        if not self.channels:
            raise ValueError("series must have at least one channel")
        for name in self.channels:
            if name not in CHANNEL_NAMES:
                raise ValueError(f"unknown channel {name!r}; expected one of {CHANNEL_NAMES}")
        lengths = set()
        normalized = {}
        for name, values in self.channels.items():
            arr = as_float_array(values, f"channel {name!r}", min_len=2)
            normalized[name] = arr
            lengths.add(arr.size)
        if len(lengths) != 1:
            raise ValueError(f"channels have mismatched lengths: {sorted(lengths)}")
        self.channels = normalized
        self._n = lengths.pop()

    def __len__(self) -> int:
        return self._n

    @property
    def t(self) -> np.ndarray:
        return self.t0_s + self.dt_s * np.arange(self._n)

    @property
    def duration_s(self) -> float:
        return self.dt_s * (self._n - 1)

    def __getitem__(self, name: str) -> np.ndarray:
        try:
            return self.channels[name]
        except KeyError:
            raise KeyError(f"series has no channel {name!r}; present: {sorted(self.channels)}") from None

    def has(self, name: str) -> bool:
        return name in self.channels
