"""Text tables and CSV for evaluation reports and cluster comparisons."""

from typing import Optional, Sequence

import numpy as np
import pandas as pd

from ..clustering.ahc import AhcResult, cluster_proximity
from ..clustering.morphology import MorphClustering
from ..features.types import FEATURE_NAMES, STYLES
from .benchmark import EvalReport, compare

EVAL_COLUMNS = [
    "method",
    "k",
    "fold",
    "lambda_mod",
    "lambda_vag",
    "lambda_agg",
    "T_s",
    "T0_ms",
    "dist_evals",
]


def _method_name(report: EvalReport) -> str:
    return report.method if report.k is None else f"{report.method}(k={report.k})"


def render_eval_csv(reports: Sequence[EvalReport]) -> str:
    """One row per fold per report, plus a ``mean`` row holding the aggregates."""
    rows = []
    for report in reports:
        k = "" if report.k is None else report.k
        for fold in report.folds:
            rows.append(
                [report.method, k, fold.fold]
                + [fold.accuracy[style] for style in STYLES]
                + [fold.time_s, fold.t0_ms, fold.distance_evals]
            )
        means = [report.style_accuracy(style) for style in STYLES]
        rows.append(
            [report.method, k, "mean"]
            + [None if m is None else m[0] for m in means]
            + [report.time_s, report.t0_ms, report.distance_evals]
        )
    return pd.DataFrame(rows, columns=EVAL_COLUMNS).to_csv(index=False, lineterminator="\n")


def _accuracy_cell(summary: Optional[tuple[float, float, float]]) -> str:
    if summary is None:
        return "n/a"
    mean, low, high = summary
    return f"{mean * 100:.2f}% [{low * 100:.2f}, {high * 100:.2f}]"


def render_eval_table(
    reports: Sequence[EvalReport], baseline: Optional[EvalReport] = None
) -> str:
    """Aligned summary: per-style accuracy (mean [min, max] over folds) and timing.

    With a ``baseline`` the table gains speedup and reduction columns.
    """
    rows = []
    for report in reports:
        row = {
            "method": _method_name(report),
            "K": ",".join(str(K) for K in report.K),
        }
        for style in STYLES:
            row[style.value] = _accuracy_cell(report.style_accuracy(style))
        row["T (s)"] = f"{report.time_s:.4f}"
        row["T0 (ms)"] = f"{report.t0_ms:.5f}"
        row["dist evals"] = str(report.distance_evals)
        if baseline is not None:
            comparison = compare(report, baseline)
            row["speedup"] = f"{comparison.speedup:.2f}x"
            row["time reduction"] = f"{comparison.time_reduction * 100:.1f}%"
            row["eval reduction"] = f"{comparison.eval_reduction * 100:.1f}%"
        rows.append(row)
    first = reports[0] if reports else baseline
    header = f"p={first.p} folds, seed={first.seed}, vote={first.vote}"
    return header + "\n" + pd.DataFrame(rows).to_string(index=False) + "\n"


def render_cluster_comparison(
    morph: MorphClustering, ahc: AhcResult, std: np.ndarray
) -> str:
    """Morphology and AHC centers side by side, matched one-to-one.

    Each pair also shows its standardized Euclidean distance under ``std``.
    """
    names = morph.style_names
    rows = []
    for i, j, distance in cluster_proximity(morph.centers, ahc.centers, std):
        row = {"cluster": names[i].value if names is not None else str(i)}
        for f, feature in enumerate(FEATURE_NAMES):
            row[f"morph_{feature}"] = f"{morph.centers[i, f]:.4f}"
            row[f"ahc_{feature}"] = f"{ahc.centers[j, f]:.4f}"
        row["morph_count"] = int(morph.counts[i])
        row["ahc_count"] = int(ahc.counts[j])
        row["sed"] = f"{distance:.4f}"
        rows.append(row)
    return pd.DataFrame(rows).to_string(index=False) + "\n"
