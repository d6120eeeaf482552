"""End-to-end experiment steps shared by the CLI and the test suite.

Every step is a pure function of (config, seed, input files) to output
files; re-running with identical inputs rewrites byte-identical outputs.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .config import ExperimentConfig
from .datasets import Direction
from .estimators import MODEL_KINDS, TrainedModel, train_model
from .exceptions import ConfigError
from .excitation import Baseline, baseline_preset, constant_cycles, sample
from .io import load_model, load_series, save_loss_curve, save_model, save_series
from .metrics import cycle_peaks, loop_width
from .plants import CatheterPlant, lag_gain, simulate
from .report import EvalReport, compare
from .series import KinematicSeries

_SPLIT_IX = {"train": 0, "test": 1}
_BASELINE_IX = {"zero": 0, "mid": 1, "end": 2}


def trajectory_rng(master_seed: int, split: str, baseline: str, freq_hz: float) -> np.random.Generator:
    """Deterministic per-trajectory noise stream, independent of run order."""
    key = [int(master_seed), _SPLIT_IX[split], _BASELINE_IX[baseline],
           int(round(freq_hz * 1e6))]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(key)))


def dataset_path(out_dir, split: str, baseline: str, freq_hz: float) -> Path:
    return Path(out_dir) / "data" / split / f"{baseline}_{freq_hz:g}hz.csv"


def model_path(out_dir, kind: str, direction: Direction) -> Path:
    return Path(out_dir) / "models" / f"{kind}_{direction.value}.model"


def loss_curve_path(out_dir, kind: str, direction: Direction) -> Path:
    return Path(out_dir) / "models" / f"{kind}_{direction.value}_loss.csv"


def generate_series(cfg: ExperimentConfig, split: str) -> dict[tuple[str, float], KinematicSeries]:
    """Simulate one series per (baseline, frequency) for the given split."""
    exc = cfg["excitation"]
    freqs = exc["train_frequencies_hz"] if split == "train" else exc["test_frequencies_hz"]
    plant = cfg.plant()
    out: dict[tuple[str, float], KinematicSeries] = {}
    for baseline in cfg.baselines():
        for f in freqs:
            spec = baseline_preset(baseline, f, q_max_mm=exc["q_max_mm"], cycles=exc["cycles"])
            cmd = sample(spec, exc["rate_hz"])
            rng = trajectory_rng(cfg.seed, split, baseline.value, f)
            out[(baseline.value, f)] = simulate(plant, cmd["q_cmd_mm"], cmd.dt_s, rng=rng)
    return out


def run_gen(cfg: ExperimentConfig, out_dir, overwrite: bool = False) -> str:
    """Write all train/test dataset files; returns the manifest text."""
    lines = []
    for split in ("train", "test"):
        series_map = generate_series(cfg, split)
        for (baseline, f), series in sorted(series_map.items()):
            path = dataset_path(out_dir, split, baseline, f)
            if path.exists() and not overwrite:
                raise FileExistsError(f"{path} exists; pass --overwrite to replace it")
            path.parent.mkdir(parents=True, exist_ok=True)
            save_series(path, series)
            lines.append(f"{split} {baseline} {f:g}Hz {path} {len(series)} samples")
    manifest = "\n".join(lines) + "\n"
    (Path(out_dir) / "manifest.txt").write_text(manifest, encoding="utf-8")
    return manifest


def load_split(cfg: ExperimentConfig, out_dir, split: str) -> dict[tuple[str, float], KinematicSeries]:
    exc = cfg["excitation"]
    freqs = exc["train_frequencies_hz"] if split == "train" else exc["test_frequencies_hz"]
    out = {}
    for baseline in cfg.baselines():
        for f in freqs:
            path = dataset_path(out_dir, split, baseline.value, f)
            if not path.exists():
                raise ConfigError(f"missing dataset {path}; run 'hystkin gen' first")
            out[(baseline.value, f)] = load_series(path)
    return out


def run_train(cfg: ExperimentConfig, out_dir, kind: str, direction: Direction) -> Path:
    """Train one (kind, direction) model on the generated training files."""
    if kind not in MODEL_KINDS:
        raise ConfigError(f"unknown model kind {kind!r}; expected one of {sorted(MODEL_KINDS)}")
    train_sets = load_split(cfg, out_dir, "train")
    series_list = [train_sets[key] for key in sorted(train_sets)]
    model = train_model(kind, direction, series_list, **cfg.estimator_settings())
    path = model_path(out_dir, kind, direction)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_model(path, model, config_digest=cfg.digest())
    save_loss_curve(loss_curve_path(out_dir, kind, direction), model.loss_curve)
    return path


def load_available_models(cfg: ExperimentConfig, out_dir) -> list[TrainedModel]:
    models = []
    for kind in MODEL_KINDS:
        for direction in cfg.directions():
            path = model_path(out_dir, kind, direction)
            if path.exists():
                models.append(load_model(path))
    return models


def run_eval(cfg: ExperimentConfig, out_dir) -> EvalReport:
    """Evaluate available models on the test files; write report + plot data."""
    test_sets = load_split(cfg, out_dir, "test")
    models = load_available_models(cfg, out_dir)
    report = compare(models, test_sets,
                     expected_kinds=sorted(MODEL_KINDS),
                     expected_directions=cfg.directions(),
                     loop_bins=cfg["eval"]["loop_bins"])
    out = Path(out_dir)
    (out / "report.csv").write_text(report.to_csv_text(), encoding="utf-8")
    (out / "report.txt").write_text(report.to_table_text(), encoding="utf-8")

    plot_dir = out / "plots"
    plot_dir.mkdir(parents=True, exist_ok=True)
    by_key = {(m.kind, m.direction): m for m in models}
    for (baseline, f), series in sorted(test_sets.items()):
        t = series.t
        for direction in cfg.directions():
            x = series[direction.x_channel]
            y_true = series[direction.y_channel]
            for kind in sorted(MODEL_KINDS):
                model = by_key.get((kind, direction))
                if model is None:
                    continue
                y_pred = model.estimator.predict(x)
                rows = ["t_s,x,y_truth,y_pred"]
                rows += [f"{float(t[k])!r},{float(x[k])!r},{float(y_true[k])!r},{float(y_pred[k])!r}"
                         for k in range(len(series))]
                name = f"{kind}_{direction.value}_{baseline}_{f:g}hz.csv"
                (plot_dir / name).write_text("\n".join(rows) + "\n", encoding="utf-8")
    return report


def run_sweep(cfg: ExperimentConfig, out_dir, scenario: str) -> str:
    if scenario == "rate-dependence":
        text = _sweep_rate_dependence(cfg)
        name = "sweep_rate_dependence.csv"
    elif scenario == "pretension":
        text = _sweep_pretension(cfg)
        name = "sweep_pretension.csv"
    else:
        raise ConfigError(f"unknown scenario {scenario!r}; expected rate-dependence or pretension")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / name).write_text(text, encoding="utf-8")
    return text


def _sweep_rate_dependence(cfg: ExperimentConfig, trials: int = 5) -> str:
    """Per-frequency peaks and loop widths under constant-amplitude cycling.

    Several noise trials per frequency are averaged, and the reported peak
    is the median of the steady-state cycle peaks of each trial.
    peak_act_mm tracks the plant's lagged tendon displacement under the
    0..2*q_max command; sine_peak_act_mm is the steady-state peak of a pure
    sinusoid of amplitude 2*q_max through the same lag (the first-order
    gain line used to calibrate the lag constant).
    """
    exc = cfg["excitation"]
    plant = cfg.plant()
    q_max = exc["q_max_mm"]
    rows = ["freq_hz,peak_theta_deg,loop_width_deg,peak_cmd_mm,peak_act_mm,sine_peak_act_mm"]
    for f in exc["train_frequencies_hz"]:
        spec = constant_cycles(q_max, f, cfg["eval"]["rate_dep_cycles"])
        cmd = sample(spec, exc["rate_hz"])
        min_sep = 0.5 / f
        peak_theta = []
        peak_act = []
        widths = []
        peak_cmd = 0.0
        for trial in range(trials):
            rng = np.random.Generator(np.random.PCG64(
                np.random.SeedSequence([cfg.seed, 3, int(round(f * 1e6)), trial])))
            series = simulate(plant, cmd["q_cmd_mm"], cmd.dt_s, rng=rng)
            theta_peaks = cycle_peaks(series, "theta_deg", min_separation_s=min_sep)
            act_peaks = cycle_peaks(series, "q_act_mm", min_separation_s=min_sep)
            steady = [v for _, v in theta_peaks[1:]] or [float(series["theta_deg"].max())]
            peak_theta.append(float(np.median(steady)))
            peak_act.append(act_peaks[-1][1] if act_peaks else float(series["q_act_mm"].max()))
            widths.append(loop_width(series, bins=cfg["eval"]["loop_bins"]))
            peak_cmd = float(series["q_cmd_mm"].max())
        gain = lag_gain(f, plant.lag_time_constant_s) if isinstance(plant, CatheterPlant) else 1.0
        rows.append(f"{f:g},{float(np.mean(peak_theta))!r},{float(np.mean(widths))!r},"
                    f"{peak_cmd!r},{float(np.mean(peak_act))!r},{2.0 * q_max * gain!r}")
    return "\n".join(rows) + "\n"


def _sweep_pretension(cfg: ExperimentConfig) -> str:
    """Repeatability vs deadband trade as pre-tension increases.

    Each pre-tension level maps to a deadband angle and a residual slack
    spread; repeatability is the average per-sample standard deviation of
    the noiseless tip angle across trials whose slack is drawn from that
    spread.
    """
    plant = cfg.plant()
    if not isinstance(plant, CatheterPlant):
        raise ConfigError("pretension sweep requires plant kind = catheter")
    ev = cfg["eval"]
    exc = cfg["excitation"]
    spec = baseline_preset(Baseline.ZERO, 0.2, q_max_mm=exc["q_max_mm"], cycles=exc["cycles"])
    cmd = sample(spec, exc["rate_hz"])
    base = plant.with_(noise_std_deg=0.0)

    rows = ["pretension_a,deadband_angle_deg,slack_std_mm,repeat_err_deg"]
    for li, level in enumerate(ev["pretension_levels_a"]):
        slack_std = ev["pretension_slack_std0_mm"] / (1.0 + ev["pretension_slack_decay_per_a"] * level)
        deadband = ev["pretension_deadband_deg_per_a"] * level
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([cfg.seed, 2, li])))
        thetas = []
        for _trial in range(ev["pretension_trials"]):
            slack = abs(rng.normal(0.0, slack_std)) if slack_std > 0.0 else 0.0
            trial_plant = base.with_(slack_mm=slack, deadband_angle_deg=deadband)
            thetas.append(simulate(trial_plant, cmd["q_cmd_mm"], cmd.dt_s)["theta_deg"])
        stack = np.vstack(thetas)
        # shift by one trial before the std so identical trials give exactly 0
        deviations = stack - stack[0]
        repeat_err = float(deviations.std(axis=0, ddof=0).mean())
        rows.append(f"{level:g},{deadband!r},{slack_std!r},{repeat_err!r}")
    return "\n".join(rows) + "\n"
