"""Synthetic single-tendon robot plants.

Three ground-truth systems stand in for hardware:

* :class:`LinearPlant` - memoryless linear displacement-to-angle map.
* :class:`BoucWenTensionPlant` - rate-independent hysteresis driven by the
  input path only (the tension-input view of a stiff-tendon robot).
* :class:`CatheterPlant` - rate-dependent pipeline: first-order actuator lag,
  tendon slack, Bouc-Wen hysteresis, deadband offset and measurement noise.

The hysteresis operator integrates

    dz/dq = A - (beta * sign(z * dq) + gamma) * |z|^n

by explicit Euler in input increments, which makes it rate independent by
construction; rate dependence of the catheter enters only through the lag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .exceptions import NumericsError
from .series import KinematicSeries
from .validation import as_float_array, check_nonnegative, check_positive

#: Euler substeps per input sample used by the plant simulations.
DEFAULT_SUBSTEPS = 100


@dataclass(frozen=True)
class BoucWenParams:
    """Shape parameters of the hysteresis operator and its output map.

    a, beta, gamma, n_exp control the internal state z; theta picks up
    c_lin [deg per input unit] plus c_hyst [deg] * z. The defaults give a
    backlash-like loop: |z| saturates at a/(beta+gamma) = 0.4 within a
    fraction of a millimetre of travel, so the branch state is recoverable
    from recent history, matching tendon-friction hysteresis.
    """

    a: float = 1.4
    beta: float = 2.5
    gamma: float = 1.0
    n_exp: float = 1.0
    c_lin: float = 8.5
    c_hyst: float = 14.0

    def __post_init__(self):
        check_positive(self.a, "a")
        if self.beta + self.gamma <= 0.0:
            raise ValueError(f"beta + gamma must be > 0, got {self.beta + self.gamma}")
        if self.n_exp < 1.0:
            raise ValueError(f"n_exp must be >= 1, got {self.n_exp}")

    def z_bound(self) -> float:
        """Least upper bound of |z| reachable from z = 0."""
        return (self.a / (self.beta + self.gamma)) ** (1.0 / self.n_exp)


def bouc_wen_step(z: float, q_now: float, q_prev: float, params: BoucWenParams,
                  substeps: int = DEFAULT_SUBSTEPS) -> float:
    """Advance the hysteresis state over one input increment q_prev -> q_now."""
    if not (math.isfinite(z) and math.isfinite(q_now) and math.isfinite(q_prev)):
        raise NumericsError(
            f"bouc_wen_step requires finite inputs, got z={z}, q_now={q_now}, q_prev={q_prev}")
    if substeps < 1:
        raise ValueError(f"substeps must be >= 1, got {substeps}")
    dq = q_now - q_prev
    if dq == 0.0:
        return z
    h = dq / substeps
    a, beta, gamma, n = params.a, params.beta, params.gamma, params.n_exp
    linear_exp = n == 1.0
    for _ in range(substeps):
        zh = z * h
        s = 1.0 if zh > 0.0 else (-1.0 if zh < 0.0 else 0.0)
        az = abs(z) if linear_exp else abs(z) ** n
        z += h * (a - (beta * s + gamma) * az)
    return z


def actuator_lag_step(p: float, q_cmd: float, dt: float, time_constant_s: float) -> float:
    """First-order lag update; exact solution for a command held over dt."""
    check_positive(dt, "dt")
    check_positive(time_constant_s, "time_constant_s")
    return q_cmd + (p - q_cmd) * math.exp(-dt / time_constant_s)


def lag_gain(f_hz: float, time_constant_s: float) -> float:
    """Steady-state amplitude ratio of a first-order lag at frequency f."""
    w = 2.0 * math.pi * f_hz
    return 1.0 / math.sqrt(1.0 + (w * time_constant_s) ** 2)


def apply_slack(p: float, slack_mm: float) -> float:
    """Effective displacement after taking up slack: max(0, p - slack)."""
    check_nonnegative(slack_mm, "slack_mm")
    return max(0.0, p - slack_mm)


def _noise(n: int, std: float, seed: int, rng: np.random.Generator | None) -> np.ndarray:
    if std == 0.0:
        return np.zeros(n)
    if rng is None:
        rng = np.random.Generator(np.random.PCG64(seed))
    return std * rng.standard_normal(n)


@dataclass(frozen=True)
class LinearPlant:
    """Memoryless displacement-input robot: theta = k * q + noise."""

    k_deg_per_mm: float = 9.0
    noise_std_deg: float = 0.35
    rng_seed: int = 0

    def __post_init__(self):
        check_nonnegative(self.noise_std_deg, "noise_std_deg")

    def simulate(self, q_cmd, dt_s: float, rng: np.random.Generator | None = None) -> KinematicSeries:
        q = as_float_array(q_cmd, "q_cmd", min_len=2)
        check_positive(dt_s, "dt_s")
        theta = self.k_deg_per_mm * q + _noise(q.size, self.noise_std_deg, self.rng_seed, rng)
        return KinematicSeries(dt_s=dt_s, channels={
            "q_cmd_mm": q, "q_act_mm": q.copy(), "theta_deg": theta})


@dataclass(frozen=True)
class BoucWenTensionPlant:
    """Rate-independent hysteretic robot (tension-input view).

    No lag, no slack: the state depends only on the input path, so replaying
    the same input samples at any speed reproduces the same loop exactly.
    """

    bw: BoucWenParams = field(default_factory=BoucWenParams)
    noise_std_deg: float = 0.35
    rng_seed: int = 0
    substeps: int = DEFAULT_SUBSTEPS

    def __post_init__(self):
        check_nonnegative(self.noise_std_deg, "noise_std_deg")

    def simulate(self, q_cmd, dt_s: float, rng: np.random.Generator | None = None) -> KinematicSeries:
        q = as_float_array(q_cmd, "q_cmd", min_len=2)
        check_positive(dt_s, "dt_s")
        z = 0.0
        z_path = np.empty(q.size)
        z_path[0] = 0.0
        for k in range(1, q.size):
            z = bouc_wen_step(z, q[k], q[k - 1], self.bw, self.substeps)
            z_path[k] = z
        theta = (self.bw.c_lin * q + self.bw.c_hyst * z_path
                 + _noise(q.size, self.noise_std_deg, self.rng_seed, rng))
        return KinematicSeries(dt_s=dt_s, channels={
            "q_cmd_mm": q, "q_act_mm": q.copy(), "theta_deg": theta, "tension_N": q.copy()})


@dataclass(frozen=True)
class CatheterPlant:
    """Rate-dependent hysteretic robot with actuator lag, slack and deadband.

    Sample pipeline: q_cmd -> first-order lag -> slack take-up -> Bouc-Wen,
    then theta = deadband + c_lin * q_eff + c_hyst * z + noise.
    """

    bw: BoucWenParams = field(default_factory=BoucWenParams)
    lag_time_constant_s: float = 0.0843
    slack_mm: float = 0.0
    deadband_angle_deg: float = 0.0
    noise_std_deg: float = 0.35
    rng_seed: int = 0
    substeps: int = DEFAULT_SUBSTEPS

    def __post_init__(self):
        check_positive(self.lag_time_constant_s, "lag_time_constant_s")
        check_nonnegative(self.slack_mm, "slack_mm")
        check_nonnegative(self.deadband_angle_deg, "deadband_angle_deg")
        check_nonnegative(self.noise_std_deg, "noise_std_deg")

    def simulate(self, q_cmd, dt_s: float, rng: np.random.Generator | None = None) -> KinematicSeries:
        q = as_float_array(q_cmd, "q_cmd", min_len=2)
        check_positive(dt_s, "dt_s")
        n = q.size
        alpha = math.exp(-dt_s / self.lag_time_constant_s)
        p = 0.0
        z = 0.0
        q_eff_prev = apply_slack(p, self.slack_mm)
        p_path = np.empty(n)
        theta = np.empty(n)
        p_path[0] = p
        theta[0] = self.deadband_angle_deg + self.bw.c_lin * q_eff_prev + self.bw.c_hyst * z
        for k in range(1, n):
            p = q[k] + (p - q[k]) * alpha
            q_eff = apply_slack(p, self.slack_mm)
            z = bouc_wen_step(z, q_eff, q_eff_prev, self.bw, self.substeps)
            q_eff_prev = q_eff
            p_path[k] = p
            theta[k] = self.deadband_angle_deg + self.bw.c_lin * q_eff + self.bw.c_hyst * z
        theta += _noise(n, self.noise_std_deg, self.rng_seed, rng)
        return KinematicSeries(dt_s=dt_s, channels={
            "q_cmd_mm": q, "q_act_mm": p_path, "theta_deg": theta})

    def with_(self, **changes) -> "CatheterPlant":
        return replace(self, **changes)


Plant = LinearPlant | BoucWenTensionPlant | CatheterPlant


def simulate(plant: Plant, q_cmd, dt_s: float, rng: np.random.Generator | None = None) -> KinematicSeries:
    """Run a command series through a plant; output aligns sample-for-sample."""
    return plant.simulate(q_cmd, dt_s, rng=rng)
