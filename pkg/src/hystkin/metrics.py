"""Error metrics and hysteresis-loop diagnostics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .series import KinematicSeries
from .validation import as_float_array

#: Minimum |dq| per sample treated as actual motion when splitting branches.
BRANCH_DEAD_ZONE_MM = 1e-6

#: Samples each branch needs inside a bin before the bin counts as populated;
#: a one-sample "branch mean" reflects where that sample sat in the bin, not
#: the loop, and the max-over-bins statistic would amplify exactly those bins.
MIN_BRANCH_SAMPLES = 3


@dataclass(frozen=True)
class Metrics:
    """RMSE plus its normalization by the ground-truth range."""

    rmse: float
    nrmse: float
    y_range: float
    n: int


def rmse_nrmse(pred, truth) -> Metrics:
    """Root-mean-square error and range-normalized RMSE.

    The normalizing range max(y) - min(y) is taken over the ground-truth
    series, so NRMSE is scale free.
    """
    p = as_float_array(pred, "pred", min_len=2)
    y = as_float_array(truth, "truth", min_len=2)
    if p.size != y.size:
        raise ValueError(f"length mismatch: pred {p.size} vs truth {y.size}")
    y_range = float(y.max() - y.min())
    if y_range <= 0.0:
        raise ValueError("truth range is zero; NRMSE undefined")
    rmse = float(np.sqrt(np.mean((p - y) ** 2)))
    return Metrics(rmse=rmse, nrmse=rmse / y_range, y_range=y_range, n=p.size)


def loop_width_xy(q, theta, bins: int = 50) -> float:
    """Max gap between loading and unloading branch means of theta(q).

    Samples are split by the sign of dq/dt (central differences, with a dead
    zone around turning points) and averaged per q bin; the width is the
    largest |loading - unloading| over bins populated by both branches.
    """
    q = as_float_array(q, "q", min_len=3)
    th = as_float_array(theta, "theta", min_len=3)
    if q.size != th.size:
        raise ValueError(f"length mismatch: q {q.size} vs theta {th.size}")
    dq = np.gradient(q)
    q_lo, q_hi = float(q.min()), float(q.max())
    if not q_hi > q_lo:
        raise ValueError("input sweep has zero range; no loop to measure")
    edges = np.linspace(q_lo, q_hi, bins + 1)
    idx = np.clip(np.searchsorted(edges, q, side="right") - 1, 0, bins - 1)
    loading = dq > BRANCH_DEAD_ZONE_MM
    unloading = dq < -BRANCH_DEAD_ZONE_MM

    width = 0.0
    populated = 0
    for b in range(bins):
        in_bin = idx == b
        load = th[in_bin & loading]
        unload = th[in_bin & unloading]
        if load.size >= MIN_BRANCH_SAMPLES and unload.size >= MIN_BRANCH_SAMPLES:
            populated += 1
            width = max(width, abs(float(load.mean()) - float(unload.mean())))
    if populated < 2:
        raise ValueError(f"only {populated} bin(s) hold both branches; need >= 2 (got a partial sweep?)")
    return width


def loop_width(series: KinematicSeries, bins: int = 50) -> float:
    """Loop width of the theta(q_cmd) relation of a series."""
    return loop_width_xy(series["q_cmd_mm"], series["theta_deg"], bins=bins)


def _refine_peak(t: np.ndarray, y: np.ndarray, i: int):
    """Quadratic refinement of a discrete maximum through its neighbors."""
    ym, y0, yp = y[i - 1], y[i], y[i + 1]
    denom = ym - 2.0 * y0 + yp
    if denom >= -1e-300:
        return float(t[i]), float(y0)
    delta = 0.5 * (ym - yp) / denom
    t_hat = t[i] + delta * (t[i] - t[i - 1])
    y_hat = y0 - 0.25 * (ym - yp) * delta
    return float(t_hat), float(y_hat)


def cycle_peaks(series: KinematicSeries, channel: str = "theta_deg",
                min_separation_s: float = 0.0) -> list[tuple[float, float]]:
    """Per-cycle maxima of a channel, with quadratic peak refinement.

    ``min_separation_s`` suppresses the smaller of two peaks closer than the
    given spacing, which filters noise-induced local maxima.
    """
    y = series[channel]
    t = series.t
    inner = np.flatnonzero((y[1:-1] > y[:-2]) & (y[1:-1] >= y[2:])) + 1
    peaks = [_refine_peak(t, y, i) for i in inner]
    if min_separation_s > 0.0 and peaks:
        peaks.sort(key=lambda p: -p[1])
        kept: list[tuple[float, float]] = []
        for tp, yp in peaks:
            if all(abs(tp - tk) >= min_separation_s for tk, _ in kept):
                kept.append((tp, yp))
        peaks = sorted(kept)
    return peaks
