import numpy as np
import pytest

from hystkin import Direction, KinematicSeries, LinearPlant, simulate, train_model
from hystkin.config import default_config, load_config
from hystkin.exceptions import ConfigError, FormatError
from hystkin.io import load_model, load_series, save_model, save_series


def sample_series(n=51, dt=0.04, seed=0):
    rng = np.random.Generator(np.random.PCG64(seed))
    return KinematicSeries(dt_s=dt, channels={
        "q_cmd_mm": rng.uniform(0, 6, n),
        "q_act_mm": rng.uniform(0, 6, n),
        "theta_deg": rng.uniform(-10, 60, n),
    })


class TestSeriesFiles:
    def test_round_trip_bit_identical(self, tmp_path):
        s = sample_series()
        path = tmp_path / "s.csv"
        save_series(path, s)
        loaded = load_series(path)
        assert loaded.dt_s == pytest.approx(s.dt_s, abs=1e-12)
        for name in s.channels:
            np.testing.assert_array_equal(loaded[name], s[name])

    def test_line_count_includes_header(self, tmp_path):
        path = tmp_path / "s.csv"
        save_series(path, sample_series(n=51))
        assert len(path.read_text().splitlines()) == 52

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(FormatError, match="empty"):
            load_series(path)

    def test_malformed_row_names_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t_s,q_cmd_mm\n0.0,1.0\n0.04,not-a-number\n0.08,2.0\n")
        with pytest.raises(FormatError, match="line 3"):
            load_series(path)

    def test_wrong_field_count_names_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t_s,q_cmd_mm\n0.0,1.0\n0.04\n")
        with pytest.raises(FormatError, match="line 3"):
            load_series(path)

    def test_non_uniform_time_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t_s,q_cmd_mm\n0.0,1.0\n0.04,2.0\n0.2,3.0\n")
        with pytest.raises(FormatError, match="uniform"):
            load_series(path)

    def test_unknown_channel_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t_s,voltage_v\n0.0,1.0\n0.04,2.0\n")
        with pytest.raises(FormatError, match="voltage_v"):
            load_series(path)

    def test_save_is_byte_stable(self, tmp_path):
        s = sample_series(seed=3)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        save_series(p1, s)
        save_series(p2, s)
        assert p1.read_bytes() == p2.read_bytes()


def tiny_model(kind="fnn", epochs=3):
    series = simulate(LinearPlant(noise_std_deg=0.01), np.linspace(0, 6, 200), 0.04)
    return train_model(kind, Direction.FORWARD, [series], epochs=epochs, seed=9)


class TestModelFiles:
    @pytest.mark.parametrize("kind", ["fnn", "fnn-hib", "lstm"])
    def test_round_trip_predictions_bit_identical(self, tmp_path, kind):
        model = tiny_model(kind)
        path = tmp_path / "m.model"
        save_model(path, model)
        again = load_model(path)
        x = np.linspace(0.0, 6.0, 97)
        np.testing.assert_array_equal(model.estimator.predict(x), again.estimator.predict(x))
        assert again.kind == kind
        assert again.direction is Direction.FORWARD

    def test_fnn_round_trip_preserves_every_parameter(self, tmp_path):
        model = tiny_model("fnn")
        path = tmp_path / "m.model"
        save_model(path, model)
        again = load_model(path)
        assert again.estimator.n_params_ == model.estimator.n_params_ == 4353
        np.testing.assert_array_equal(again.estimator.net_.store.value,
                                      model.estimator.net_.store.value)

    def test_tampered_shape_fails_with_diagnostic(self, tmp_path):
        model = tiny_model("fnn")
        path = tmp_path / "m.model"
        save_model(path, model)
        text = path.read_text()
        tampered = text.replace("tensor fc1.W 1 64", "tensor fc1.W 1 63", 1)
        path.write_text(tampered)
        with pytest.raises(FormatError):
            load_model(path)

    def test_wrong_magic_rejected(self, tmp_path):
        path = tmp_path / "m.model"
        path.write_text("something else\n")
        with pytest.raises(FormatError, match="model file"):
            load_model(path)

    def test_save_is_byte_stable(self, tmp_path):
        model = tiny_model("fnn")
        p1, p2 = tmp_path / "a.model", tmp_path / "b.model"
        save_model(p1, model, config_digest="d1")
        save_model(p2, model, config_digest="d1")
        assert p1.read_bytes() == p2.read_bytes()


class TestConfigFiles:
    def test_minimal_config_gets_all_defaults(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[plant]\nkind = linear\n")
        cfg = load_config(path)
        assert cfg["plant"]["kind"] == "linear"
        assert cfg["train"]["epochs"] == 500
        assert cfg["excitation"]["train_frequencies_hz"] == [0.1, 0.2, 0.3, 0.4, 0.5]
        assert cfg["plant"]["noise_std_deg"] == 0.35

    def test_frequency_list_parsing(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[plant]\nkind = catheter\n[excitation]\n"
                        "train_frequencies_hz = 0.1,0.2,0.3,0.4,0.5\n")
        cfg = load_config(path)
        assert cfg["excitation"]["train_frequencies_hz"] == [0.1, 0.2, 0.3, 0.4, 0.5]

    def test_unknown_key_is_hard_error_naming_key(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[plant]\nkind = linear\nnois_std_deg = 0.1\n")
        with pytest.raises(ConfigError, match="nois_std_deg"):
            load_config(path)

    def test_unknown_section_rejected(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[plant]\nkind = linear\n[plotting]\ncolor = red\n")
        with pytest.raises(ConfigError, match="plotting"):
            load_config(path)

    def test_missing_plant_section_rejected(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[train]\nepochs = 5\n")
        with pytest.raises(ConfigError, match=r"\[plant\]"):
            load_config(path)

    def test_type_error_names_key(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[plant]\nkind = linear\n[train]\nepochs = soon\n")
        with pytest.raises(ConfigError, match="epochs"):
            load_config(path)

    def test_bad_plant_kind_rejected(self, tmp_path):
        path = tmp_path / "c.ini"
        path.write_text("[plant]\nkind = quadruped\n")
        with pytest.raises(ConfigError, match="quadruped"):
            load_config(path)

    def test_digest_stable_and_sensitive(self, tmp_path):
        a = default_config("catheter")
        b = default_config("catheter")
        assert a.digest() == b.digest()
        b.values["train"]["seed"] = 1
        assert a.digest() != b.digest()
