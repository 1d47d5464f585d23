"""Tests for experiment configs, the config validator and runtime settings."""

import json
from pathlib import Path

import pytest

from src.core.config import Config
from src.core.errors import TheoremPreconditionError, ValidationError
from src.core.validator import ConfigValidator
from src.harness.config import (
    BesovQuery,
    config_from_dict,
    config_hash,
    describe,
    load_config,
)
from src.procsim.descriptors import ProcessKind


CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"
MINIMAL = {"kind": "Fbm", "H": 0.5, "n_points": 4097, "seed": 7}


def write_config(tmp_path, data, name="config.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


class TestConfigValidator:
    """Test cases for ConfigValidator."""

    def test_valid_minimal_config(self):
        """Test validation of a minimal config."""
        is_valid, error = ConfigValidator.validate(dict(MINIMAL))

        assert is_valid
        assert error == ""

    def test_missing_required_fields(self):
        """Test validation with missing required fields."""
        is_valid, error = ConfigValidator.validate({"kind": "Bm"})

        assert not is_valid
        assert "Missing required fields" in error
        assert "n_points" in error

    def test_unknown_fields(self):
        """Test that misspelled fields are reported."""
        is_valid, error = ConfigValidator.validate({**MINIMAL, "hurst": 0.5})

        assert not is_valid
        assert "Unknown fields: hurst" in error

    def test_invalid_kind(self):
        """Test validation with an unknown process kind."""
        is_valid, error = ConfigValidator.validate({"kind": "Levy", "n_points": 9})

        assert not is_valid
        assert "Invalid field 'kind'" in error

    def test_missing_hurst_parameter(self):
        """Test that Fbm requires H."""
        is_valid, error = ConfigValidator.validate({"kind": "Fbm", "n_points": 9})

        assert not is_valid
        assert "Field 'H'" in error

    def test_bifbm_requires_k(self):
        """Test that BifBm requires K."""
        is_valid, error = ConfigValidator.validate({"kind": "BifBm", "H": 0.5, "n_points": 9})

        assert not is_valid
        assert "Field 'K'" in error

    def test_dimension_out_of_range(self):
        """Test validation of d."""
        is_valid, error = ConfigValidator.validate({**MINIMAL, "d": 4})

        assert not is_valid
        assert "Field 'd'" in error

    def test_boolean_is_not_an_integer(self):
        """Test that booleans are rejected where integers are expected."""
        is_valid, error = ConfigValidator.validate({**MINIMAL, "n_replicates": True})

        assert not is_valid
        assert "Field 'n_replicates'" in error

    def test_invalid_sampler(self):
        """Test validation of the sampler name."""
        is_valid, error = ConfigValidator.validate({**MINIMAL, "sampler": "fft"})

        assert not is_valid
        assert "Invalid field 'sampler'" in error

    def test_invalid_besov_query(self):
        """Test that the offending query is named."""
        config = {**MINIMAL, "besov": [{"nu": 0.4, "p": 4}, {"nu": 0.5, "p": 0.5}]}
        is_valid, error = ConfigValidator.validate(config)

        assert not is_valid
        assert "besov[1].p" in error

    def test_invalid_localtime_block(self):
        """Test validation of the local-time block."""
        config = {**MINIMAL, "localtime": {"bin_width": -1.0}}
        is_valid, error = ConfigValidator.validate(config)

        assert not is_valid
        assert "localtime.bin_width" in error

    def test_invalid_lnd_block(self):
        """Test that k must have m entries."""
        config = {**MINIMAL, "lnd": {"m": 2, "k": [1], "alpha": 0.5}}
        is_valid, error = ConfigValidator.validate(config)

        assert not is_valid
        assert "lnd.k" in error

    def test_invalid_lnd_mode(self):
        """Test validation of the LND sampling mode."""
        config = {**MINIMAL, "lnd": {"m": 2, "k": [1, 1], "alpha": 0.5, "mode": "sobol"}}
        is_valid, error = ConfigValidator.validate(config)

        assert not is_valid
        assert "lnd.mode" in error

    def test_not_an_object(self):
        """Test that a JSON array is rejected."""
        is_valid, error = ConfigValidator.validate([MINIMAL])

        assert not is_valid
        assert "JSON object" in error


class TestLoadConfig:
    """Tests for config loading and defaults."""

    def test_minimal_config_defaults(self, tmp_path):
        """Test the defaults filled in for a minimal config."""
        config = load_config(write_config(tmp_path, MINIMAL))

        assert config.descriptor.kind is ProcessKind.FBM
        assert config.grid.n_points == 4097
        assert config.seed == 7
        assert config.n_replicates == 1
        assert config.tau == 0.1
        assert config.J_max == 10
        assert config.besov == (BesovQuery(nu=0.5, p=4.0),)
        assert config.localtime is None

    def test_hash_is_stable(self, tmp_path):
        """Test that loading the same file twice gives the same hash."""
        path = write_config(tmp_path, MINIMAL)

        assert config_hash(load_config(path)) == config_hash(load_config(path))

    def test_hash_changes_with_seed(self):
        """Test that the seed is part of the hash."""
        first = config_from_dict(MINIMAL)
        second = config_from_dict({**MINIMAL, "seed": 8})

        assert config_hash(first) != config_hash(second)

    def test_dict_round_trip(self):
        """Test that the canonical form loads back to an equal config."""
        config = config_from_dict({
            **MINIMAL,
            "localtime": {"q": 2, "nu": [0.4]},
            "besov": [{"nu": 0.4, "p": 2, "q": 2}],
        })
        restored = config_from_dict(config.to_dict())

        assert restored == config
        assert config_hash(restored) == config_hash(config)

    def test_localtime_defaults(self):
        """Test that local-time nu and J_max default from the process and grid."""
        config = config_from_dict({**MINIMAL, "localtime": {}})

        assert config.localtime.nu == (0.5,)
        assert config.localtime.J_max == config.J_max
        assert config.localtime.residual_tests == ("one", "coordinate")

    def test_local_time_regime_enforced(self):
        """Test that alpha * d >= 1 is rejected for local-time experiments."""
        data = {"kind": "Fbm", "H": 0.4, "d": 3, "n_points": 1025, "localtime": {}}
        with pytest.raises(TheoremPreconditionError):
            config_from_dict(data)

    def test_path_experiment_without_local_time_allows_large_alpha(self):
        """Test that the regime check only applies to local-time experiments."""
        config = config_from_dict({"kind": "Fbm", "H": 0.4, "d": 3, "n_points": 1025})

        assert config.descriptor.d == 3

    def test_invalid_hurst_value(self):
        """Test that an out-of-range H names the field."""
        with pytest.raises(ValidationError, match="Invalid field 'H'"):
            config_from_dict({"kind": "Fbm", "H": 1.5, "n_points": 1025})

    def test_invalid_grid(self):
        """Test that a non-dyadic grid names the field."""
        with pytest.raises(ValidationError, match="Invalid field 'n_points'"):
            config_from_dict({"kind": "Bm", "n_points": 1000})

    def test_invalid_she_block(self):
        """Test that a bad SHE block names the field."""
        with pytest.raises(ValidationError, match="Invalid field 'she'"):
            config_from_dict({"kind": "She", "n_points": 129, "she": {"nx": 4}})

    def test_unknown_residual_test(self):
        """Test that residual tests must be known test functions."""
        data = {**MINIMAL, "localtime": {"residual_tests": ["sinc"]}}
        with pytest.raises(ValidationError, match="localtime.residual_tests"):
            config_from_dict(data)

    def test_lnd_needs_gaussian_kind(self):
        """Test that the alpha-LND block is rejected for She."""
        data = {"kind": "She", "n_points": 129, "lnd": {"m": 2, "k": [1, 1], "alpha": 0.2}}
        with pytest.raises(ValidationError, match="Gaussian"):
            config_from_dict(data)

    def test_j_max_beyond_grid(self):
        """Test that J_max cannot exceed the grid level minus two."""
        with pytest.raises(ValidationError, match="Invalid field 'J_max'"):
            config_from_dict({**MINIMAL, "J_max": 13})

    def test_j_max_above_usable_level(self):
        """Test that J_max = level - 1 is rejected while level - 2 is accepted."""
        with pytest.raises(ValidationError, match="exceeds the largest usable level 10"):
            config_from_dict({**MINIMAL, "J_max": 11})

        assert config_from_dict({**MINIMAL, "J_max": 10}).J_max == 10

    def test_localtime_j_max_above_usable_level(self):
        """Test the same limit on the local-time J_max."""
        data = {**MINIMAL, "H": 0.3, "localtime": {"J_max": 11}}
        with pytest.raises(ValidationError, match="Invalid field 'localtime.J_max'"):
            config_from_dict(data)

    def test_invalid_bifractional_index(self):
        """Test that an out-of-range K names the field K."""
        with pytest.raises(ValidationError, match="Invalid field 'K'"):
            config_from_dict({"kind": "BifBm", "H": 0.5, "K": 1.5, "n_points": 1025})

    def test_invalid_hurst_with_valid_k(self):
        """Test that a bad H on BifBm names H, not K."""
        with pytest.raises(ValidationError, match="Invalid field 'H'"):
            config_from_dict({"kind": "BifBm", "H": 0.0, "K": 0.5, "n_points": 1025})

    def test_overrides(self):
        """Test seed, replicate and output overrides."""
        config = config_from_dict(MINIMAL).with_overrides(seed=9, n_replicates=3, out_dir="out")

        assert (config.seed, config.n_replicates, config.out_dir) == (9, 3, "out")

    def test_missing_file(self, tmp_path):
        """Test that a missing config raises FileNotFoundError."""
        with pytest.raises(FileNotFoundError):
            load_config(str(tmp_path / "missing.json"))

    def test_invalid_json(self, tmp_path):
        """Test that malformed JSON raises ValidationError."""
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ValidationError, match="not valid JSON"):
            load_config(str(path))

    def test_shipped_configs_load(self):
        """Test that the example configs in configs/ are valid."""
        for name in ("fbm_path_besov", "bifbm_critical", "bm_localtime", "she_linear"):
            config = load_config(str(CONFIG_DIR / f"{name}.json"))
            assert config.n_replicates >= 1

    def test_describe(self):
        """Test the banner lines."""
        lines = describe(config_from_dict({**MINIMAL, "localtime": {}}))

        assert lines[0] == "Process: Fbm(H=0.5, d=1)"
        assert any(line.startswith("Local time:") for line in lines)


class TestRuntimeConfig:
    """Tests for environment-driven runtime settings."""

    def test_load_from_env(self, monkeypatch, tmp_path):
        """Test reading threads and log level from the environment."""
        monkeypatch.setenv("BESOVLAB_THREADS", "3")
        monkeypatch.setenv("BESOVLAB_LOG_LEVEL", "debug")

        config = Config.load_from_env(str(tmp_path / "absent.env"))

        assert config == {"threads": 3, "log_level": "DEBUG"}
        assert Config.validate_config(config)

    def test_invalid_threads(self):
        """Test that at least one thread is required."""
        with pytest.raises(ValueError, match="BESOVLAB_THREADS"):
            Config.validate_config({"threads": 0, "log_level": "INFO"})

    def test_invalid_log_level(self):
        """Test that unknown log levels are rejected."""
        with pytest.raises(ValueError, match="BESOVLAB_LOG_LEVEL"):
            Config.validate_config({"threads": 1, "log_level": "LOUD"})

    def test_log_level(self):
        """Test the numeric level."""
        assert Config.log_level({"threads": 1, "log_level": "WARNING"}) == 30
