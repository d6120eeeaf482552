import numpy as np

from hystkin import Direction, LinearPlant, compare, constant_cycles, sample, simulate, train_model


def make_test_sets(plant, freqs=(0.15, 0.45), baselines=("zero", "mid")):
    sets = {}
    for b in baselines:
        for f in freqs:
            cmd = sample(constant_cycles(3.0, f, 2), 25.0)
            sets[(b, f)] = simulate(plant, cmd["q_cmd_mm"], cmd.dt_s)
    return sets


def quick_models(plant, kinds=("fnn", "fnn-hib", "lstm"), directions=(Direction.FORWARD,)):
    cmd = sample(constant_cycles(3.0, 0.2, 4), 25.0)
    series = simulate(plant, cmd["q_cmd_mm"], cmd.dt_s)
    models = []
    for kind in kinds:
        for d in directions:
            epochs = 4 if kind == "lstm" else 8
            models.append(train_model(kind, d, [series], epochs=epochs, seed=0))
    return models


class TestCompare:
    def test_cell_count_full_grid(self):
        plant = LinearPlant(noise_std_deg=0.01)
        models = quick_models(plant, directions=(Direction.FORWARD, Direction.INVERSE))
        sets = make_test_sets(plant, freqs=(0.15, 0.45), baselines=("zero", "mid", "end"))
        report = compare(models, sets)
        assert len(report.cells) == 3 * 2 * 2 * 3  # kinds x directions x freqs x baselines
        assert not report.missing
        assert len(report.ratios) == 2 * 2 * 3

    def test_missing_model_reported_not_skipped(self):
        plant = LinearPlant(noise_std_deg=0.01)
        models = quick_models(plant, kinds=("fnn", "fnn-hib"))
        sets = make_test_sets(plant, freqs=(0.15,), baselines=("zero",))
        report = compare(models, sets, expected_kinds=["fnn", "fnn-hib", "lstm"],
                         expected_directions=[Direction.FORWARD])
        assert ("lstm", "forward", "zero", 0.15) in report.missing
        assert ("fnn", "forward", "zero", 0.15) in report.cells

    def test_linear_plant_no_model_needs_history(self):
        # every hypothesis class contains the linear map, so all three land
        # at low error on the memoryless plant (unlike the hysteretic ones,
        # where the plain FNN is pinned near the loop half-width)
        plant = LinearPlant(noise_std_deg=0.01)
        cmds = [sample(constant_cycles(3.0, f, 6), 25.0) for f in (0.2, 0.4)]
        series = [simulate(plant, c["q_cmd_mm"], c.dt_s) for c in cmds]
        models = [train_model(k, Direction.FORWARD, series,
                              epochs=(200 if k == "lstm" else 60), seed=0)
                  for k in ("fnn", "fnn-hib", "lstm")]
        sets = make_test_sets(plant, freqs=(0.15,), baselines=("zero",))
        report = compare(models, sets)
        errs = [report.cells[(k, "forward", "zero", 0.15)].nrmse for k in ("fnn", "fnn-hib", "lstm")]
        assert max(errs) < 0.015

    def test_report_renderings(self):
        plant = LinearPlant(noise_std_deg=0.01)
        models = quick_models(plant)
        sets = make_test_sets(plant, freqs=(0.15,), baselines=("zero",))
        report = compare(models, sets)
        csv = report.to_csv_text()
        assert csv.splitlines()[0].startswith("kind,direction,baseline,freq_hz")
        assert len(csv.strip().splitlines()) == 1 + 3
        table = report.to_table_text()
        assert "Forward kinematics" in table
        assert "fnn-hib" in table

    def test_loop_widths_recorded_for_forward_cells(self):
        plant = LinearPlant(noise_std_deg=0.01)
        models = quick_models(plant)
        sets = make_test_sets(plant, freqs=(0.15,), baselines=("zero",))
        report = compare(models, sets)
        for key, (w_true, w_pred) in report.loop_widths.items():
            assert key[1] == "forward"
            assert w_true >= 0.0 and w_pred >= 0.0
