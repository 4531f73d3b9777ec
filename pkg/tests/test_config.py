"""Test run configuration loading."""

import sys
from pathlib import Path

import pytest

# Add project root to path
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.utils.config import RunConfig, load_config, read_config_file
from src.utils.validators import DataError, ValidationError

PROJECT_ROOT = Path(__file__).parent.parent


def test_defaults():
    """Built-in defaults."""
    config = load_config()
    assert config == RunConfig()
    assert config.seed == 0
    assert config.morphology.q == (100, 100, 100)
    assert config.morphology.r == 10
    assert config.morphology.noise_fraction == 0.02
    assert config.recognizer.k == 2
    assert config.recognizer.K is None
    assert config.crossval.p == 4
    assert config.ahc.target_clusters == 4
    assert config.ahc.linkage == "ward"
    assert config.features.decision_threshold == 0.21


def test_shipped_config_file():
    """config/config.yaml holds the defaults plus the profile file path."""
    config = load_config(PROJECT_ROOT / "config" / "config.yaml")
    assert config.morphology == RunConfig().morphology
    assert config.recognizer == RunConfig().recognizer
    assert config.datagen.profiles == "config/profiles.yaml"


def test_overrides_then_file(tmp_path):
    """Flags override defaults and a config file overrides flags."""
    path = tmp_path / "run.yaml"
    path.write_text("recognizer:\n  k: 4\nseed: 9\n")
    overrides = {"seed": 1, "recognizer": {"k": 3, "vote": "count"}}

    flags_only = load_config(overrides=overrides)
    assert flags_only.seed == 1
    assert flags_only.recognizer.k == 3

    both = load_config(path, overrides)
    assert both.seed == 9
    assert both.recognizer.k == 4
    assert both.recognizer.vote == "count"


def test_invalid_values(tmp_path):
    """Values outside their ranges and unknown keys are usage errors."""
    with pytest.raises(ValidationError):
        load_config(overrides={"morphology": {"r": 0}})
    with pytest.raises(ValidationError):
        load_config(overrides={"recognizer": {"vote": "median"}})

    path = tmp_path / "bad.yaml"
    path.write_text("crossval:\n  folds: 4\n")
    with pytest.raises(ValidationError, match="bad.yaml"):
        load_config(path)


def test_unreadable_files(tmp_path):
    """Missing or malformed YAML is a data error."""
    with pytest.raises(DataError):
        load_config(tmp_path / "absent.yaml")

    path = tmp_path / "broken.yaml"
    path.write_text("recognizer: [unclosed\n")
    with pytest.raises(DataError):
        read_config_file(path)

    path.write_text("- just\n- a list\n")
    with pytest.raises(DataError):
        read_config_file(path)

    path.write_text("")
    assert read_config_file(path) == {}
