"""Cross-validation, recognition benchmarking and report rendering."""

from .benchmark import Comparison, EvalReport, FoldResult, benchmark, compare
from .crossval import accuracy, kfold_split
from .report import render_cluster_comparison, render_eval_csv, render_eval_table

__all__ = [
    "Comparison",
    "EvalReport",
    "FoldResult",
    "accuracy",
    "benchmark",
    "compare",
    "kfold_split",
    "render_cluster_comparison",
    "render_eval_csv",
    "render_eval_table",
]
