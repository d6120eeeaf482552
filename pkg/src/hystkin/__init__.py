"""hystkin: hysteresis kinematics modeling on synthetic tendon-robot plants.

Pipeline: design excitation signals, simulate ground-truth plants, train
three model families (FNN, history-buffer FNN, LSTM) in forward and inverse
directions, and compare them cell by cell.
"""

from .datasets import Direction, UnitIntervalScaler, WindowSpec, make_dataset, make_windows
from .estimators import (
    FNNRegressor,
    HistoryBufferFNNRegressor,
    LSTMRegressor,
    TrainedModel,
    make_estimator,
    predict_series,
    train_model,
)
from .excitation import (
    Baseline,
    ExcitationSpec,
    baseline_preset,
    constant_cycles,
    decaying_sinusoid,
    resample,
    sample,
)
from .metrics import Metrics, cycle_peaks, loop_width, loop_width_xy, rmse_nrmse
from .plants import (
    BoucWenParams,
    BoucWenTensionPlant,
    CatheterPlant,
    LinearPlant,
    actuator_lag_step,
    apply_slack,
    bouc_wen_step,
    lag_gain,
    simulate,
)
from .report import EvalReport, compare
from .series import KinematicSeries

__version__ = "0.1.0"

__all__ = [
    "Baseline",
    "BoucWenParams",
    "BoucWenTensionPlant",
    "CatheterPlant",
    "Direction",
    "EvalReport",
    "ExcitationSpec",
    "FNNRegressor",
    "HistoryBufferFNNRegressor",
    "KinematicSeries",
    "LSTMRegressor",
    "LinearPlant",
    "Metrics",
    "TrainedModel",
    "UnitIntervalScaler",
    "WindowSpec",
    "actuator_lag_step",
    "apply_slack",
    "baseline_preset",
    "bouc_wen_step",
    "compare",
    "constant_cycles",
    "cycle_peaks",
    "decaying_sinusoid",
    "lag_gain",
    "loop_width",
    "loop_width_xy",
    "make_dataset",
    "make_estimator",
    "make_windows",
    "predict_series",
    "resample",
    "rmse_nrmse",
    "sample",
    "simulate",
    "train_model",
]
