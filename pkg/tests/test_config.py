"""
Test experiment config loading, validation and settings
"""

import math

import pytest

from adrx.config import Settings
from adrx.models import RunMode
from adrx.utils.config_loader import (
    ConfigParseError,
    ConfigValidationError,
    apply_overrides,
    config_from_mapping,
    load_config,
)

BASE = [
    "channel.D=8",
    "channel.r0=11",
    "channel.rr=10",
    "channel.k1=40",
    "channel.km1=5",
    "sim.dt=1e-4",
    "sim.ts=0.002",
    "sim.t_end=0.02",
    "sim.trials=4",
]


class TestPresets:
    """Test the shipped preset files."""

    def test_adsorption_sweep(self, presets_dir):
        cfg = load_config(presets_dir / "adsorption_sweep.env")
        assert cfg.mode == RunMode.COMPARE
        assert cfg.sim.dt == 1e-5 and cfg.sim.trials == 100 and cfg.sim.seed == 1
        assert [v.label for v in cfg.variants()] == ["k1=2", "k1=20", "k1=40", "k1=inf"]
        assert math.isinf(cfg.variants()[-1].channel.k1)

    def test_desorption_sweep(self, presets_dir):
        cfg = load_config(presets_dir / "desorption_sweep.env")
        assert cfg.sim.dt == 1e-4
        assert [v.channel.km1 for v in cfg.variants()] == [1.0, 5.0, 20.0]
        assert all(v.channel.k1 == 20.0 for v in cfg.variants())

    def test_absorbing_limit(self, presets_dir):
        cfg = load_config(presets_dir / "absorbing_limit.env")
        assert cfg.channel.is_absorbing
        assert cfg.channel.km1 == 0.0
        assert [v.label for v in cfg.variants()] == [""]


class TestLoadConfig:
    """Test parsing and validation errors."""

    def test_defaults_fill_in(self, write_config):
        """Only k1 is required."""
        cfg = load_config(write_config(["channel.k1=20"]))
        assert cfg.channel.D == 8.0 and cfg.channel.r0 == 11.0 and cfg.channel.ntx == 1000
        assert cfg.sim.ts == 0.002 and cfg.mode == RunMode.COMPARE

    def test_comments_and_blank_lines(self, write_config):
        cfg = load_config(write_config(["# header", "", *BASE, "  # trailing"]))
        assert cfg.channel.k1 == 40.0 and cfg.sim.trials == 4

    def test_quadrature_keys(self, write_config):
        cfg = load_config(write_config([*BASE, "quad.talbot_terms=24", "quad.rel_tol=1e-6"]))
        assert cfg.quad.talbot_terms == 24 and cfg.quad.rel_tol == 1e-6

    def test_talbot_terms_out_of_range(self, write_config):
        with pytest.raises(ConfigValidationError) as exc:
            load_config(write_config([*BASE, "quad.talbot_terms=4"]))
        assert "quad.talbot_terms" in exc.value.fields

    def test_missing_k1(self, write_config):
        with pytest.raises(ConfigValidationError) as exc:
            load_config(write_config([line for line in BASE if not line.startswith("channel.k1")]))
        assert "channel.k1" in exc.value.fields

    def test_transmitter_inside_receiver(self, write_config):
        """r0 < rr breaks d > 0."""
        with pytest.raises(ConfigValidationError) as exc:
            load_config(write_config([*BASE, "channel.r0=9"]))
        assert "d = r0 - rr" in str(exc.value)

    def test_window_not_multiple_of_step(self, write_config):
        with pytest.raises(ConfigValidationError) as exc:
            load_config(write_config([*BASE, "sim.ts=0.00025", "sim.dt=1e-4"]))
        assert "ts must be an integer multiple of dt" in str(exc.value)

    def test_negative_rate(self, write_config):
        with pytest.raises(ConfigValidationError) as exc:
            load_config(write_config([*BASE, "channel.km1=-1"]))
        assert "channel.km1" in exc.value.fields

    def test_unknown_key(self, write_config):
        with pytest.raises(ConfigValidationError) as exc:
            load_config(write_config([*BASE, "channel.colour=red"]))
        assert exc.value.fields == ["channel.colour"]

    def test_bad_mode(self, write_config):
        with pytest.raises(ConfigValidationError) as exc:
            load_config(write_config([*BASE, "experiment.mode=fit"]))
        assert "mode" in exc.value.fields

    def test_malformed_line(self, write_config):
        with pytest.raises(ConfigParseError, match=":3:"):
            load_config(write_config(["channel.k1=20", "sim.dt=1e-4", "this is not a setting"]))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigParseError, match="not found"):
            load_config(tmp_path / "nope.env")

    def test_sweep_with_bad_value(self, write_config):
        with pytest.raises(ConfigValidationError) as exc:
            load_config(write_config([*BASE, "experiment.sweep.k1=2,abc"]))
        assert exc.value.fields == ["experiment.sweep.k1"]

    def test_sweep_value_checked_against_channel(self, write_config):
        """A negative swept rate is rejected at load time."""
        with pytest.raises(ConfigValidationError):
            load_config(write_config([*BASE, "experiment.sweep.km1=1,-5"]))


class TestSweep:
    """Test variant expansion."""

    def test_cartesian_order(self, write_config):
        """Axes expand in declaration order, first axis slowest."""
        cfg = load_config(
            write_config([*BASE, "experiment.sweep.k1=2,40", "experiment.sweep.km1=0.5,20"])
        )
        assert [v.label for v in cfg.variants()] == [
            "k1=2;km1=0.5",
            "k1=2;km1=20",
            "k1=40;km1=0.5",
            "k1=40;km1=20",
        ]
        assert cfg.variants()[2].overrides == {"k1": 40.0, "km1": 0.5}

    def test_sweep_leaves_base_channel(self, write_config):
        cfg = load_config(write_config([*BASE, "experiment.sweep.km1=1,20"]))
        assert cfg.channel.km1 == 5.0
        assert [v.channel.km1 for v in cfg.variants()] == [1.0, 20.0]


class TestOverrides:
    """Test command-line overrides."""

    def test_overrides_apply(self, write_config):
        cfg = load_config(write_config(BASE))
        updated = apply_overrides(cfg, seed=9, trials=12, mode="analytic", output_path="out.csv")
        assert updated.sim.seed == 9 and updated.sim.trials == 12
        assert updated.mode == RunMode.ANALYTIC and updated.output_path == "out.csv"
        assert cfg.sim.seed == 0

    def test_zero_trials_rejected(self, write_config):
        cfg = load_config(write_config(BASE))
        with pytest.raises(ConfigValidationError) as exc:
            apply_overrides(cfg, trials=0)
        assert "sim.trials" in exc.value.fields

    def test_mapping_entry_point(self):
        cfg = config_from_mapping({"channel.k1": "inf", "channel.km1": "0"})
        assert cfg.channel.is_absorbing


class TestSettings:
    """Test environment-driven settings."""

    def test_threads_from_environment(self, monkeypatch):
        monkeypatch.setenv("ADRX_THREADS", "3")
        assert Settings(_env_file=None).threads == 3

    def test_threads_clamped(self, monkeypatch):
        monkeypatch.setenv("ADRX_THREADS", "0")
        assert Settings(_env_file=None).threads == 1

    def test_threads_default_to_hardware(self, monkeypatch):
        monkeypatch.delenv("ADRX_THREADS", raising=False)
        assert Settings(_env_file=None).threads >= 1

    def test_log_level_normalised(self, monkeypatch):
        monkeypatch.setenv("ADRX_LOG_LEVEL", "debug")
        assert Settings(_env_file=None).log_level == "DEBUG"
