"""Model-comparison reports over a grid of test cells.

A cell is (model kind, direction, test frequency, baseline). The report
mirrors the usual benchmark layout: RMSE and NRMSE per cell, plus the ratio
of the plain FNN's error to the best history-aware model per cell.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .datasets import Direction, make_dataset
from .estimators import TrainedModel, predict_series
from .metrics import Metrics, loop_width_xy, rmse_nrmse
from .series import KinematicSeries

#: (kind, direction token, baseline token, frequency Hz)
CellKey = tuple[str, str, str, float]


@dataclass
class EvalReport:
    cells: dict[CellKey, Metrics] = field(default_factory=dict)
    #: per (direction, baseline, freq): FNN NRMSE / best history-model NRMSE
    ratios: dict[tuple[str, str, float], float] = field(default_factory=dict)
    #: forward-cell loop widths: key -> (truth width, prediction width)
    loop_widths: dict[CellKey, tuple[float, float]] = field(default_factory=dict)
    missing: list[CellKey] = field(default_factory=list)

    def nrmse(self, kind: str, direction: str, baseline: str, freq: float) -> float:
        return self.cells[(kind, direction, baseline, freq)].nrmse

    def to_csv_text(self) -> str:
        lines = ["kind,direction,baseline,freq_hz,n,rmse,nrmse,fnn_to_best_ratio,"
                 "loop_width_truth,loop_width_pred"]
        for key in sorted(self.cells, key=_cell_sort_key):
            kind, direction, baseline, freq = key
            m = self.cells[key]
            ratio = self.ratios.get((direction, baseline, freq))
            widths = self.loop_widths.get(key)
            lines.append(",".join([
                kind, direction, baseline, repr(freq), str(m.n),
                repr(m.rmse), repr(m.nrmse),
                "" if ratio is None else repr(ratio),
                "" if widths is None else repr(widths[0]),
                "" if widths is None else repr(widths[1]),
            ]))
        for key in sorted(self.missing, key=_cell_sort_key):
            lines.append(",".join([key[0], key[1], key[2], repr(key[3]), "MISSING", "", "", "", "", ""]))
        return "\n".join(lines) + "\n"

    def to_table_text(self) -> str:
        kinds = sorted({k[0] for k in self.cells})
        out = []
        for direction in ("forward", "inverse"):
            keys = [k for k in self.cells if k[1] == direction]
            if not keys:
                continue
            freqs = sorted({k[3] for k in keys})
            baselines = sorted({k[2] for k in keys}, key=_baseline_order)
            unit = "deg" if direction == "forward" else "mm"
            out.append(f"{direction.capitalize()} kinematics")
            header = ["model".ljust(9)]
            for metric in ("RMSE (" + unit + ")", "NRMSE"):
                for f in freqs:
                    for b in baselines:
                        header.append(f"{metric} {f:g}Hz {b}".rjust(22))
            out.append(" ".join(header))
            for kind in kinds:
                row = [kind.ljust(9)]
                for attr in ("rmse", "nrmse"):
                    for f in freqs:
                        for b in baselines:
                            key = (kind, direction, b, f)
                            if key in self.cells:
                                v = getattr(self.cells[key], attr)
                                cell = f"{v:.3f}" if attr == "rmse" else f"{100 * v:.2f}%"
                            else:
                                cell = "missing"
                            row.append(cell.rjust(22))
                out.append(" ".join(row))
            out.append("")
        if self.missing:
            out.append("missing cells: " + ", ".join(str(k) for k in sorted(self.missing, key=_cell_sort_key)))
            out.append("")
        return "\n".join(out)


def _cell_sort_key(key: CellKey):
    return (key[1], key[0], key[3], _baseline_order(key[2]))


def _baseline_order(token: str) -> int:
    return {"zero": 0, "mid": 1, "end": 2}.get(token, 99)


def compare(models: list[TrainedModel],
            test_sets: dict[tuple[str, float], KinematicSeries],
            expected_kinds: list[str] | None = None,
            expected_directions: list[Direction] | None = None,
            loop_bins: int = 50) -> EvalReport:
    """Evaluate every (model, test series) cell and assemble the report.

    ``test_sets`` maps (baseline token, frequency Hz) to a ground-truth
    series. If expected kinds/directions are given, absent models are
    recorded under ``missing`` instead of being silently skipped.
    """
    report = EvalReport()
    have = {(m.kind, m.direction): m for m in models}
    kinds = expected_kinds or sorted({m.kind for m in models})
    directions = expected_directions or sorted({m.direction for m in models}, key=lambda d: d.value)

    predictions: dict[CellKey, np.ndarray] = {}
    for direction in directions:
        for (baseline, freq), series in sorted(test_sets.items()):
            xs, ys = make_dataset([series], direction)
            x, y_true = xs[0], ys[0]
            for kind in kinds:
                key = (kind, direction.value, baseline, freq)
                model = have.get((kind, direction))
                if model is None:
                    report.missing.append(key)
                    continue
                y_pred = predict_series(model, x)
                predictions[key] = y_pred
                report.cells[key] = rmse_nrmse(y_pred, y_true)
                if direction is Direction.FORWARD:
                    report.loop_widths[key] = (
                        loop_width_xy(x, y_true, bins=loop_bins),
                        loop_width_xy(x, y_pred, bins=loop_bins),
                    )

    for direction in directions:
        for (baseline, freq) in test_sets:
            cell = {k: report.cells.get((k, direction.value, baseline, freq)) for k in kinds}
            fnn = cell.get("fnn")
            rivals = [m for k, m in cell.items() if k != "fnn" and m is not None]
            if fnn is not None and rivals:
                best = min(m.nrmse for m in rivals)
                report.ratios[(direction.value, baseline, freq)] = fnn.nrmse / best
    return report
