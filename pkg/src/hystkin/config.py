"""Experiment configuration: sectioned key=value files with strict keys.

Only [plant] with its ``kind`` key is mandatory; every other key falls back
to a documented default. Unknown sections or keys are hard errors so typos
cannot silently change an experiment.
"""

from __future__ import annotations

import configparser
import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from .datasets import Direction
from .exceptions import ConfigError
from .excitation import Baseline
from .plants import BoucWenParams, BoucWenTensionPlant, CatheterPlant, LinearPlant


def _floats(text: str) -> list[float]:
    return [float(tok) for tok in text.replace(",", " ").split()]


def _tokens(text: str) -> list[str]:
    return [tok.strip().lower() for tok in text.replace(",", " ").split()]


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


# section -> key -> (parser, default, help); default None means required.
SCHEMA: dict[str, dict[str, tuple] ] = {
    "plant": {
        "kind": (str.strip, None, "plant type: linear | bouc-wen-tension | catheter"),
        "k_deg_per_mm": (float, 9.0, "linear plant slope"),
        "bw_a": (float, 1.4, "hysteresis gain A"),
        "bw_beta": (float, 2.5, "hysteresis shape beta"),
        "bw_gamma": (float, 1.0, "hysteresis shape gamma"),
        "bw_n": (float, 1.0, "hysteresis exponent >= 1"),
        "c_lin_deg_per_mm": (float, 8.5, "linear stiffness term of hysteretic plants"),
        "c_hyst_deg": (float, 14.0, "hysteretic output gain"),
        "lag_time_constant_s": (float, 0.0843, "first-order actuator lag time constant"),
        "slack_mm": (float, 0.0, "tendon slack before motion engages"),
        "deadband_angle_deg": (float, 0.0, "tip-angle offset from pre-tension"),
        "noise_std_deg": (float, 0.35, "measurement noise standard deviation"),
    },
    "excitation": {
        "q_max_mm": (float, 3.0, "commanded amplitude of the decaying sinusoid"),
        "cycles": (int, 12, "cycles per trajectory"),
        "rate_hz": (float, 25.0, "fixed model sampling rate"),
        "train_frequencies_hz": (_floats, [0.1, 0.2, 0.3, 0.4, 0.5], "training frequencies"),
        "test_frequencies_hz": (_floats, [0.15, 0.45], "held-out test frequencies"),
        "baselines": (_tokens, ["zero", "mid", "end"], "baseline presets to generate"),
    },
    "train": {
        "epochs": (int, 500, "training epochs (fixed budget, no early stopping)"),
        "batch_size": (int, 16, "mini-batch size"),
        "learning_rate": (float, 0.001, "Adam learning rate"),
        "buffer_len": (int, 50, "history buffer length of the FNN-HIB model"),
        "subseq_len": (int, 50, "LSTM training subsequence length"),
        "flag_value": (float, -1.0, "marker fed before sequence starts (normalized units)"),
        "hidden_size": (int, 64, "LSTM hidden width"),
        "num_layers": (int, 2, "LSTM layer count"),
        "seed": (int, 0, "master seed for data noise, init and shuffling"),
    },
    "eval": {
        "directions": (_tokens, ["forward", "inverse"], "kinematic directions to evaluate"),
        "loop_bins": (int, 50, "q bins for loop-width measurements"),
        "rate_dep_cycles": (int, 7, "constant cycles per frequency in the rate sweep"),
        "pretension_levels_a": (_floats, [0.0, 0.15, 0.30, 0.45, 0.60], "pre-tension currents"),
        "pretension_trials": (int, 5, "trials per pre-tension level"),
        "pretension_slack_std0_mm": (float, 0.36, "slack spread with no pre-tension"),
        "pretension_slack_decay_per_a": (float, 32.0, "slack spread shrink rate vs current"),
        "pretension_deadband_deg_per_a": (float, 24.4, "deadband growth vs current"),
    },
}

PLANT_KINDS = ("linear", "bouc-wen-tension", "catheter")


@dataclass
class ExperimentConfig:
    values: dict[str, dict[str, object]] = field(default_factory=dict)

    def __getitem__(self, section: str) -> dict[str, object]:
        return self.values[section]

    # -- convenience accessors -------------------------------------------------
    @property
    def seed(self) -> int:
        return self.values["train"]["seed"]

    @property
    def rate_hz(self) -> float:
        return self.values["excitation"]["rate_hz"]

    def baselines(self) -> list[Baseline]:
        return [Baseline.from_token(t) for t in self.values["excitation"]["baselines"]]

    def directions(self) -> list[Direction]:
        return [Direction.from_token(t) for t in self.values["eval"]["directions"]]

    def bouc_wen_params(self) -> BoucWenParams:
        p = self.values["plant"]
        return BoucWenParams(a=p["bw_a"], beta=p["bw_beta"], gamma=p["bw_gamma"],
                             n_exp=p["bw_n"], c_lin=p["c_lin_deg_per_mm"],
                             c_hyst=p["c_hyst_deg"])

    def plant(self, rng_seed: int = 0):
        p = self.values["plant"]
        kind = p["kind"]
        if kind == "linear":
            return LinearPlant(k_deg_per_mm=p["k_deg_per_mm"],
                               noise_std_deg=p["noise_std_deg"], rng_seed=rng_seed)
        if kind == "bouc-wen-tension":
            return BoucWenTensionPlant(bw=self.bouc_wen_params(),
                                       noise_std_deg=p["noise_std_deg"], rng_seed=rng_seed)
        if kind == "catheter":
            return CatheterPlant(bw=self.bouc_wen_params(),
                                 lag_time_constant_s=p["lag_time_constant_s"],
                                 slack_mm=p["slack_mm"],
                                 deadband_angle_deg=p["deadband_angle_deg"],
                                 noise_std_deg=p["noise_std_deg"], rng_seed=rng_seed)
        raise ConfigError(f"unknown plant kind {kind!r}; expected one of {PLANT_KINDS}")

    def estimator_settings(self) -> dict[str, object]:
        t = self.values["train"]
        return {
            "epochs": t["epochs"], "batch_size": t["batch_size"],
            "learning_rate": t["learning_rate"], "seed": t["seed"],
            "buffer_len": t["buffer_len"], "subseq_len": t["subseq_len"],
            "flag_value": t["flag_value"], "hidden_size": t["hidden_size"],
            "num_layers": t["num_layers"],
        }

    def canonical_text(self) -> str:
        lines = []
        for section in sorted(self.values):
            for key in sorted(self.values[section]):
                lines.append(f"{section}.{key}={self.values[section][key]!r}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_text().encode()).hexdigest()[:16]


def default_config(plant_kind: str = "catheter") -> ExperimentConfig:
    values = {section: {key: spec[1] for key, spec in keys.items()}
              for section, keys in SCHEMA.items()}
    values["plant"]["kind"] = plant_kind
    cfg = ExperimentConfig(values)
    cfg.plant()  # validates kind
    return cfg


def load_config(path) -> ExperimentConfig:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            parser.read_file(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from None

    values: dict[str, dict[str, object]] = {}
    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigError(
                f"{path}: unknown section [{section}]; expected {sorted(SCHEMA)}")
        values[section] = {}
        for key, raw in parser.items(section):
            if key not in SCHEMA[section]:
                raise ConfigError(
                    f"{path}: unknown key {key!r} in [{section}]; "
                    f"valid keys: {sorted(SCHEMA[section])}")
            parse = SCHEMA[section][key][0]
            try:
                values[section][key] = parse(raw)
            except (ValueError, TypeError) as exc:
                raise ConfigError(f"{path}: bad value for [{section}] {key}: {exc}") from None

    if "plant" not in values:
        raise ConfigError(f"{path}: missing required section [plant]")

    for section, keys in SCHEMA.items():
        values.setdefault(section, {})
        for key, (parse, default, _help) in keys.items():
            if key not in values[section]:
                if default is None:
                    raise ConfigError(f"{path}: missing required key {key!r} in [{section}]")
                values[section][key] = default

    cfg = ExperimentConfig(values)
    kind = cfg.values["plant"]["kind"]
    if kind not in PLANT_KINDS:
        raise ConfigError(f"{path}: unknown plant kind {kind!r}; expected one of {PLANT_KINDS}")
    return cfg


def config_reference() -> str:
    """Human-readable listing of every config key with its default."""
    out = []
    for section, keys in SCHEMA.items():
        out.append(f"[{section}]")
        for key, (_parse, default, help_text) in keys.items():
            shown = "REQUIRED" if default is None else default
            out.append(f"  {key} = {shown}  # {help_text}")
        out.append("")
    return "\n".join(out)
