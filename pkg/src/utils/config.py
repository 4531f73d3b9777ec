"""Run configuration: built-in defaults, command-line overrides and YAML files."""

from pathlib import Path
from typing import Any, Literal, Mapping, Optional, Union

import pydantic
import yaml
from pydantic import BaseModel, ConfigDict, Field

from .validators import DataError, ValidationError


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class LoggingSettings(_Section):
    level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"


class FeatureSettings(_Section):
    decision_threshold: float = Field(default=0.21, gt=0)


class MorphologySettings(_Section):
    q: tuple[int, int, int] = (100, 100, 100)
    r: int = Field(default=10, ge=1)
    noise_fraction: float = Field(default=0.02, ge=0, lt=0.5)
    connectivity: Literal[6, 18, 26] = 26


class KMeansSettings(_Section):
    max_iter: int = Field(default=300, ge=1)


class RecognizerSettings(_Section):
    method: Literal["knn", "kmcknn"] = "kmcknn"
    k: int = Field(default=2, ge=1)
    K: Optional[int] = Field(default=None, ge=1)
    vote: Literal["weighted", "count", "literal"] = "weighted"


class CrossvalSettings(_Section):
    p: int = Field(default=4, ge=2)
    repeats: int = Field(default=3, ge=1)
    k_values: Optional[list[int]] = None


class AhcSettings(_Section):
    target_clusters: int = Field(default=4, ge=1)
    linkage: Literal["ward", "single", "complete", "average"] = "ward"


class DatagenSettings(_Section):
    n: int = Field(default=9936, ge=1)
    mode: Literal["features", "scenario"] = "features"
    profiles: Optional[str] = None
    noise_clump: bool = False


class RunConfig(_Section):
    """Every tunable of one command invocation."""

    seed: int = 0
    logging: LoggingSettings = LoggingSettings()
    features: FeatureSettings = FeatureSettings()
    morphology: MorphologySettings = MorphologySettings()
    kmeans: KMeansSettings = KMeansSettings()
    recognizer: RecognizerSettings = RecognizerSettings()
    crossval: CrossvalSettings = CrossvalSettings()
    ahc: AhcSettings = AhcSettings()
    datagen: DatagenSettings = DatagenSettings()


def _merge(base: dict, update: Mapping[str, Any]) -> dict:
    merged = dict(base)
    for key, value in update.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), Mapping):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def read_config_file(path: Union[str, Path]) -> dict:
    """Load a YAML config file as a nested mapping."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"Config file not found: {path}")
    try:
        with open(path) as f:
            raw = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise DataError(f"{path}: {e}")
    if raw is None:
        return {}
    if not isinstance(raw, dict):
        raise DataError(f"{path}: expected a mapping at the top level")
    return raw


def load_config(
    config_path: Optional[Union[str, Path]] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> RunConfig:
    """Defaults, then ``overrides`` (command-line flags), then the config file."""
    data = _merge({}, overrides or {})
    if config_path is not None:
        data = _merge(data, read_config_file(config_path))
    try:
        return RunConfig.model_validate(data)
    except pydantic.ValidationError as e:
        source = f" in {config_path}" if config_path is not None else ""
        raise ValidationError(f"Invalid configuration{source}: {e}")
