"""Excitation signal design: decaying sinusoids and resampling.

The workhorse signal is

    q(t) = q_max * exp(-tau * t) * (sin(2*pi*f_h*t - pi/2) + c) + q_offset

whose shrinking cycles sweep hysteresis loops over a range of sizes. Three
baseline presets (zero / mid / end) move the oscillation's rest point while
keeping q(0) = 0 and q(t) >= 0.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .series import KinematicSeries
from .validation import check_nonnegative, check_positive

#: Decay rate multiplier giving consecutive peak ratio 6/7 per cycle.
PEAK_DECAY_LOG = math.log(7.0 / 6.0)

# Guards against floor() flipping down on exact-integer products, e.g. 12/0.4*25.
_GRID_NUDGE = 1e-9


class Baseline(enum.Enum):
    """Rest-point presets of the decaying sinusoid."""

    ZERO = "zero"   # oscillates upward from 0
    MID = "mid"     # oscillates around q_max
    END = "end"     # dips downward from 2*q_max

    @classmethod
    def from_token(cls, token: str) -> "Baseline":
        try:
            return cls(token.strip().lower())
        except ValueError:
            valid = ", ".join(b.value for b in cls)
            raise ValueError(f"unknown baseline {token!r}; expected one of: {valid}") from None


@dataclass(frozen=True)
class ExcitationSpec:
    """Parameters of one excitation trajectory."""

    q_max_mm: float
    c: float
    q_offset_mm: float
    f_h_hz: float
    tau_per_s: float
    t_max_s: float

    def __post_init__(self):
        check_positive(self.q_max_mm, "q_max_mm")
        check_positive(self.f_h_hz, "f_h_hz")
        check_nonnegative(self.tau_per_s, "tau_per_s")
        check_positive(self.t_max_s, "t_max_s")


def decaying_sinusoid(spec: ExcitationSpec, t):
    """Evaluate the excitation at time(s) t in [0, t_max]."""
    t_arr = np.asarray(t, dtype=np.float64)
    if np.any(t_arr < 0.0) or np.any(t_arr > spec.t_max_s * (1.0 + 1e-12) + _GRID_NUDGE):
        raise ValueError(f"t must lie in [0, {spec.t_max_s}] s")
    envelope = spec.q_max_mm * np.exp(-spec.tau_per_s * t_arr)
    value = envelope * (np.sin(2.0 * np.pi * spec.f_h_hz * t_arr - np.pi / 2.0) + spec.c) + spec.q_offset_mm
    return float(value) if np.isscalar(t) else value


def baseline_preset(kind: Baseline, f_h_hz: float, q_max_mm: float = 3.0, cycles: int = 12) -> ExcitationSpec:
    """Build one of the three preset trajectories at a given frequency.

    All presets use decay rate tau = f_h * log(7/6), so consecutive peak
    amplitudes of the decaying term shrink by exactly 6/7 per cycle.
    """
    check_positive(f_h_hz, "f_h_hz")
    if cycles < 1:
        raise ValueError(f"cycles must be >= 1, got {cycles}")
    if kind is Baseline.ZERO:
        c, offset = 1.0, 0.0
    elif kind is Baseline.MID:
        c, offset = 0.0, q_max_mm
    else:
        c, offset = -1.0, 2.0 * q_max_mm
    return ExcitationSpec(
        q_max_mm=q_max_mm,
        c=c,
        q_offset_mm=offset,
        f_h_hz=f_h_hz,
        tau_per_s=f_h_hz * PEAK_DECAY_LOG,
        t_max_s=cycles / f_h_hz,
    )


def constant_cycles(q_max_mm: float, f_h_hz: float, n_cycles: int) -> ExcitationSpec:
    """Non-decaying sinusoid sweeping 0 to 2*q_max for n_cycles periods."""
    if n_cycles < 1:
        raise ValueError(f"n_cycles must be >= 1, got {n_cycles}")
    return ExcitationSpec(
        q_max_mm=q_max_mm,
        c=1.0,
        q_offset_mm=0.0,
        f_h_hz=f_h_hz,
        tau_per_s=0.0,
        t_max_s=n_cycles / f_h_hz,
    )


def sample(spec: ExcitationSpec, rate_hz: float) -> KinematicSeries:
    """Sample the excitation on the grid t_k = k / rate_hz covering [0, t_max]."""
    check_positive(rate_hz, "rate_hz")
    n = int(math.floor(spec.t_max_s * rate_hz + _GRID_NUDGE)) + 1
    t = np.arange(n) / rate_hz
    q = decaying_sinusoid(spec, t)
    return KinematicSeries(dt_s=1.0 / rate_hz, channels={"q_cmd_mm": q})


def resample(series: KinematicSeries, rate_hz: float) -> KinematicSeries:
    """Linearly interpolate all channels onto a uniform grid at rate_hz.

    The new grid spans the same time range as the input.
    """
    check_positive(rate_hz, "rate_hz")
    n = int(math.floor(series.duration_s * rate_hz + _GRID_NUDGE)) + 1
    if n < 2:
        raise ValueError(f"resampling to {rate_hz} Hz leaves {n} sample(s); need >= 2")
    t_old = series.t
    t_new = series.t0_s + np.arange(n) / rate_hz
    channels = {name: np.interp(t_new, t_old, values) for name, values in series.channels.items()}
    return KinematicSeries(dt_s=1.0 / rate_hz, channels=channels, t0_s=series.t0_s)
