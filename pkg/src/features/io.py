"""CSV formats for datasets and trajectories."""

from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import pandas as pd

from ..utils.validators import DataError, ValidationError
from .types import ALL_LABELS, FEATURE_NAMES, TRAJECTORY_COLUMNS, Dataset, ScenarioFrame, StyleLabel

PathLike = Union[str, Path]


def _read_frame(path: PathLike) -> pd.DataFrame:
    path = Path(path)
    if not path.exists():
        raise DataError(f"File not found: {path}")
    try:
        return pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise DataError(f"{path}: file is empty")
    except pd.errors.ParserError as e:
        raise DataError(f"{path}: {e}")


def _numeric_columns(df: pd.DataFrame, columns: Sequence[str], path: PathLike) -> np.ndarray:
    """Parse columns as floats, naming the first offending line (header is line 1)."""
    values = np.empty((len(df), len(columns)), dtype=np.float64)
    for j, column in enumerate(columns):
        try:
            column_values = df[column].astype(np.float64).to_numpy()
        except ValueError:
            # to_numeric is not correctly rounded; only used to locate the bad line
            parsed = pd.to_numeric(df[column], errors="coerce")
            column_values = parsed.to_numpy(dtype=np.float64, na_value=np.nan)
        bad = np.flatnonzero(~np.isfinite(column_values))
        if len(bad):
            row = int(bad[0])
            raise DataError(
                f"{path}, line {row + 2}: column {column!r} has invalid value "
                f"{df[column].iloc[row]!r}"
            )
        values[:, j] = column_values
    return values


def read_dataset_csv(path: PathLike) -> Dataset:
    """Read a ``dd,dv,da[,label]`` CSV."""
    df = _read_frame(path)
    columns = list(df.columns)
    if columns not in (list(FEATURE_NAMES), list(FEATURE_NAMES) + ["label"]):
        raise DataError(
            f"{path}, line 1: expected header dd,dv,da[,label], got {','.join(columns)}"
        )
    if df.empty:
        raise DataError(f"{path}: no samples")

    features = _numeric_columns(df, FEATURE_NAMES, path)
    negative = np.flatnonzero((features < 0).any(axis=1))
    if len(negative):
        raise DataError(f"{path}, line {negative[0] + 2}: features must be >= 0")

    labels = None
    if "label" in df.columns:
        codes = []
        for row, text in enumerate(df["label"]):
            try:
                codes.append(StyleLabel.parse(text.strip()).code)
            except ValidationError as e:
                raise DataError(f"{path}, line {row + 2}: {e}")
        labels = np.array(codes, dtype=np.int64)
    return Dataset(features, labels)


def render_dataset_csv(data: Dataset, labels: Optional[Sequence[str]] = None) -> str:
    """Render a dataset as CSV text; ``labels`` overrides the dataset's own labels."""
    df = pd.DataFrame(data.features, columns=list(FEATURE_NAMES))
    if labels is not None:
        df["label"] = list(labels)
    elif data.labels is not None:
        df["label"] = [ALL_LABELS[code].value for code in data.labels]
    return df.to_csv(index=False, lineterminator="\n")


def read_trajectory_csv(path: PathLike) -> list[ScenarioFrame]:
    """Read a ``t,dA,dB,vA,vB,vC,aA,aB,aC,vLatC`` trajectory CSV."""
    df = _read_frame(path)
    if list(df.columns) != list(TRAJECTORY_COLUMNS):
        raise DataError(f"{path}, line 1: expected header {','.join(TRAJECTORY_COLUMNS)}")
    values = _numeric_columns(df, TRAJECTORY_COLUMNS, path)
    frames = []
    for row, record in enumerate(values):
        try:
            frames.append(ScenarioFrame(*map(float, record)))
        except ValidationError as e:
            raise DataError(f"{path}, line {row + 2}: {e}")
    return frames


def render_trajectory_csv(frames: Sequence[ScenarioFrame]) -> str:
    """Render trajectory frames as CSV text."""
    rows = [[getattr(frame, column) for column in TRAJECTORY_COLUMNS] for frame in frames]
    return pd.DataFrame(rows, columns=list(TRAJECTORY_COLUMNS)).to_csv(
        index=False, lineterminator="\n"
    )
