import numpy as np
import pytest

from hystkin.cli import main
from hystkin.io import load_series


def write_config(tmp_path, body):
    path = tmp_path / "exp.ini"
    path.write_text(body)
    return str(path)


SMALL_CATHETER = """
[plant]
kind = catheter

[excitation]
cycles = 2
train_frequencies_hz = 0.2, 0.4
test_frequencies_hz = 0.3
baselines = zero, mid

[train]
epochs = 2
seed = 0
"""

SMALL_LINEAR = """
[plant]
kind = linear

[excitation]
cycles = 2
train_frequencies_hz = 0.2, 0.4
test_frequencies_hz = 0.3
baselines = zero, mid

[train]
epochs = 2
"""


class TestGen:
    def test_writes_expected_files_and_manifest(self, tmp_path, capsys):
        cfg = write_config(tmp_path, SMALL_CATHETER)
        out = tmp_path / "run"
        assert main(["gen", "--config", cfg, "--out", str(out)]) == 0
        train_files = sorted(p.name for p in (out / "data" / "train").iterdir())
        test_files = sorted(p.name for p in (out / "data" / "test").iterdir())
        assert train_files == ["mid_0.2hz.csv", "mid_0.4hz.csv", "zero_0.2hz.csv", "zero_0.4hz.csv"]
        assert test_files == ["mid_0.3hz.csv", "zero_0.3hz.csv"]
        manifest = (out / "manifest.txt").read_text()
        assert manifest == capsys.readouterr().out
        # 2 cycles / 0.2 Hz * 25 Hz + 1 = 251 samples
        assert "zero 0.2Hz" in manifest and "251 samples" in manifest
        assert len(load_series(out / "data" / "train" / "zero_0.2hz.csv")) == 251

    def test_default_catheter_counts(self, tmp_path):
        cfg = write_config(tmp_path, "[plant]\nkind = catheter\n[excitation]\ncycles = 1\n[train]\nepochs = 1\n")
        out = tmp_path / "run"
        assert main(["gen", "--config", cfg, "--out", str(out)]) == 0
        assert len(list((out / "data" / "train").iterdir())) == 15  # 3 baselines x 5 freqs
        assert len(list((out / "data" / "test").iterdir())) == 6    # 3 baselines x 2 freqs

    def test_existing_files_need_overwrite(self, tmp_path, capsys):
        cfg = write_config(tmp_path, SMALL_CATHETER)
        out = tmp_path / "run"
        assert main(["gen", "--config", cfg, "--out", str(out)]) == 0
        assert main(["gen", "--config", cfg, "--out", str(out)]) == 1
        assert "overwrite" in capsys.readouterr().err
        assert main(["gen", "--config", cfg, "--out", str(out), "--overwrite"]) == 0

    def test_rerun_is_byte_identical(self, tmp_path):
        cfg = write_config(tmp_path, SMALL_CATHETER)
        out = tmp_path / "run"
        main(["gen", "--config", cfg, "--out", str(out)])
        first = (out / "data" / "train" / "zero_0.2hz.csv").read_bytes()
        main(["gen", "--config", cfg, "--out", str(out), "--overwrite"])
        assert (out / "data" / "train" / "zero_0.2hz.csv").read_bytes() == first


class TestTrain:
    def test_single_kind_and_direction(self, tmp_path):
        cfg = write_config(tmp_path, SMALL_LINEAR)
        out = tmp_path / "run"
        main(["gen", "--config", cfg, "--out", str(out)])
        rc = main(["train", "--config", cfg, "--out", str(out), "--kind", "fnn", "--direction", "fwd"])
        assert rc == 0
        assert (out / "models" / "fnn_forward.model").exists()
        loss = (out / "models" / "fnn_forward_loss.csv").read_text().splitlines()
        assert loss[0] == "epoch,mse"
        assert len(loss) == 1 + 2  # header + one line per epoch

    def test_all_kinds_both_directions(self, tmp_path):
        cfg = write_config(tmp_path, SMALL_LINEAR)
        out = tmp_path / "run"
        main(["gen", "--config", cfg, "--out", str(out)])
        assert main(["train", "--config", cfg, "--out", str(out)]) == 0
        names = sorted(p.name for p in (out / "models").iterdir() if p.suffix == ".model")
        assert names == ["fnn-hib_forward.model", "fnn-hib_inverse.model",
                         "fnn_forward.model", "fnn_inverse.model",
                         "lstm_forward.model", "lstm_inverse.model"]

    def test_identical_seeds_identical_model_files(self, tmp_path):
        cfg = write_config(tmp_path, SMALL_LINEAR)
        out1, out2 = tmp_path / "a", tmp_path / "b"
        for out in (out1, out2):
            main(["gen", "--config", cfg, "--out", str(out)])
            main(["train", "--config", cfg, "--out", str(out), "--kind", "fnn", "--direction", "fwd"])
        assert ((out1 / "models" / "fnn_forward.model").read_bytes()
                == (out2 / "models" / "fnn_forward.model").read_bytes())

    def test_missing_data_is_config_error(self, tmp_path):
        cfg = write_config(tmp_path, SMALL_LINEAR)
        rc = main(["train", "--config", cfg, "--out", str(tmp_path / "nope"),
                   "--kind", "fnn", "--direction", "fwd"])
        assert rc == 1


class TestEval:
    def test_report_and_plot_data(self, tmp_path):
        cfg = write_config(tmp_path, SMALL_LINEAR)
        out = tmp_path / "run"
        main(["gen", "--config", cfg, "--out", str(out)])
        main(["train", "--config", cfg, "--out", str(out)])
        assert main(["eval", "--config", cfg, "--out", str(out)]) == 0
        report = (out / "report.csv").read_text().splitlines()
        # header + 3 kinds x 2 directions x 1 freq x 2 baselines
        assert len(report) == 1 + 12
        plot = (out / "plots" / "fnn_forward_zero_0.3hz.csv").read_text().splitlines()
        n = len(load_series(out / "data" / "test" / "zero_0.3hz.csv"))
        assert len(plot) == 1 + n

    def test_missing_models_reported(self, tmp_path, capsys):
        cfg = write_config(tmp_path, SMALL_LINEAR)
        out = tmp_path / "run"
        main(["gen", "--config", cfg, "--out", str(out)])
        main(["train", "--config", cfg, "--out", str(out), "--kind", "fnn", "--direction", "fwd"])
        assert main(["eval", "--config", cfg, "--out", str(out)]) == 0
        text = capsys.readouterr().out
        assert "missing" in text
        assert "fnn-hib" in (out / "report.csv").read_text()


class TestSweep:
    def test_rate_dependence_table(self, tmp_path, capsys):
        cfg = write_config(tmp_path, SMALL_CATHETER)
        out = tmp_path / "run"
        assert main(["sweep", "--config", cfg, "--out", str(out), "--scenario", "rate-dependence"]) == 0
        table = (out / "sweep_rate_dependence.csv").read_text().splitlines()
        assert table[0].startswith("freq_hz,peak_theta_deg,loop_width_deg")
        assert len(table) == 1 + 2  # one row per train frequency

    def test_pretension_table_zero_variance_zero_error(self, tmp_path):
        body = SMALL_CATHETER + "\n[eval]\npretension_slack_std0_mm = 0.0\npretension_levels_a = 0.0, 0.45\n"
        cfg = write_config(tmp_path, body)
        out = tmp_path / "run"
        assert main(["sweep", "--config", cfg, "--out", str(out), "--scenario", "pretension"]) == 0
        rows = (out / "sweep_pretension.csv").read_text().splitlines()[1:]
        for row in rows:
            assert float(row.split(",")[-1]) == 0.0

    def test_unknown_scenario_rejected(self, tmp_path, capsys):
        cfg = write_config(tmp_path, SMALL_CATHETER)
        rc = main(["sweep", "--config", cfg, "--out", str(tmp_path / "x"), "--scenario", "resonance"])
        assert rc == 1


class TestUsage:
    def test_bad_flag_exits_one(self, capsys):
        assert main(["gen", "--nonsense"]) == 1

    def test_unknown_config_key_exits_one(self, tmp_path, capsys):
        cfg = write_config(tmp_path, "[plant]\nkind = linear\ntypo_key = 3\n")
        assert main(["gen", "--config", cfg, "--out", str(tmp_path / "o")]) == 1
        assert "typo_key" in capsys.readouterr().err

    def test_help_lists_config_keys(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--help"])
        assert exc.value.code == 0
        text = capsys.readouterr().out
        for key in ("noise_std_deg", "train_frequencies_hz", "epochs", "buffer_len", "loop_bins"):
            assert key in text

    def test_seed_override_changes_outputs(self, tmp_path):
        cfg = write_config(tmp_path, SMALL_CATHETER)
        out1, out2 = tmp_path / "s0", tmp_path / "s1"
        main(["gen", "--config", cfg, "--out", str(out1)])
        main(["gen", "--config", cfg, "--out", str(out2), "--seed", "123"])
        a = load_series(out1 / "data" / "train" / "zero_0.2hz.csv")["theta_deg"]
        b = load_series(out2 / "data" / "train" / "zero_0.2hz.csv")["theta_deg"]
        assert np.any(a != b)
