"""Dataset construction: direction pairing, [0, 1] scaling and history windows."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .series import KinematicSeries
from .validation import as_float_array

#: Tolerance for treating two sampling intervals as equal (seconds).
DT_TOL_S = 1e-9


class Direction(enum.Enum):
    """Which map a model learns: commanded displacement -> angle, or back."""

    FORWARD = "forward"   # x = q_cmd_mm, y = theta_deg
    INVERSE = "inverse"   # x = theta_deg, y = q_cmd_mm

    @property
    def x_channel(self) -> str:
        return "q_cmd_mm" if self is Direction.FORWARD else "theta_deg"

    @property
    def y_channel(self) -> str:
        return "theta_deg" if self is Direction.FORWARD else "q_cmd_mm"

    @classmethod
    def from_token(cls, token: str) -> "Direction":
        t = token.strip().lower()
        aliases = {"fwd": "forward", "inv": "inverse"}
        t = aliases.get(t, t)
        try:
            return cls(t)
        except ValueError:
            raise ValueError(f"unknown direction {token!r}; expected fwd/forward or inv/inverse") from None


@dataclass(frozen=True)
class WindowSpec:
    """History window: length in samples, and the marker value that fills
    positions before a trajectory's start (in normalized units)."""

    length: int = 50
    flag_value: float = -1.0

    def __post_init__(self):
        if self.length < 1:
            raise ValueError(f"window length must be >= 1, got {self.length}")


def make_dataset(series_list: list[KinematicSeries], direction: Direction):
    """Pair input/output sequences per trajectory, preserving boundaries.

    All series must share one sampling rate; returns (xs, ys) lists of 1-D
    arrays in source units.
    """
    if not series_list:
        raise ValueError("need at least one series")
    dt0 = series_list[0].dt_s
    xs, ys = [], []
    for i, s in enumerate(series_list):
        if abs(s.dt_s - dt0) > DT_TOL_S:
            raise ValueError(
                f"mixed sampling rates: series[{i}] has dt={s.dt_s} s, expected {dt0} s")
        xs.append(s[direction.x_channel].copy())
        ys.append(s[direction.y_channel].copy())
    return xs, ys


class UnitIntervalScaler:
    """Affine map of training range onto [0, 1]; inverse is exact.

    Values outside the training range extrapolate beyond [0, 1] rather than
    clip, so inverse-model commands are never silently saturated.
    """

    def __init__(self):
        self.min_: float | None = None
        self.max_: float | None = None

    def fit(self, values) -> "UnitIntervalScaler":
        arr = np.concatenate([as_float_array(v, "values") for v in
                              (values if isinstance(values, (list, tuple)) else [values])])
        lo, hi = float(arr.min()), float(arr.max())
        if not hi > lo:
            raise ValueError(f"degenerate range [{lo}, {hi}]; cannot normalize")
        self.min_, self.max_ = lo, hi
        return self

    def _check(self):
        if self.min_ is None:
            raise RuntimeError("scaler is not fitted")

    def transform(self, x):
        self._check()
        return (np.asarray(x, dtype=np.float64) - self.min_) / (self.max_ - self.min_)

    def inverse_transform(self, u):
        self._check()
        return self.min_ + np.asarray(u, dtype=np.float64) * (self.max_ - self.min_)


def make_windows(x: np.ndarray, spec: WindowSpec) -> np.ndarray:
    """Sliding history windows over one normalized trajectory.

    Window k holds [x_{k-l+1}, ..., x_k] with flag values standing in for
    samples before the start; output shape is (len(x), l).
    """
    x = as_float_array(x, "x")
    padded = np.concatenate([np.full(spec.length - 1, spec.flag_value), x])
    return np.lib.stride_tricks.sliding_window_view(padded, spec.length).copy()
