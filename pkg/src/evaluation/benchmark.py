"""Cross-validated accuracy and recognition timing for KNN and kMC-KNN."""

import logging
import statistics
import time
from dataclasses import dataclass, field
from functools import partial
from typing import Optional

import numpy as np

from ..features.types import STYLES, Dataset, StyleLabel
from ..recognizers.kmc_knn import kmcknn_recognize_batch, kmcknn_train
from ..recognizers.knn import knn_classify_batch, knn_fit
from ..recognizers.scan import warm_up
from ..utils.validators import validate_choice, validate_positive_int
from .crossval import accuracy, kfold_split

logger = logging.getLogger(__name__)

METHODS = ("knn", "kmcknn")


@dataclass(frozen=True)
class FoldResult:
    fold: int
    n_train: int
    n_test: int
    K: int
    accuracy: dict[StyleLabel, Optional[float]]
    times: list[float]  # seconds, one per repeat
    distance_evals: int

    @property
    def time_s(self) -> float:
        return min(self.times)

    @property
    def t0_ms(self) -> float:
        return self.time_s / self.n_test * 1000


@dataclass(frozen=True)
class EvalReport:
    """Per-fold results plus the configuration that produced them."""

    method: str
    k: Optional[int]
    p: int
    seed: int
    vote: str
    folds: list[FoldResult] = field(default_factory=list)

    @property
    def K(self) -> list[int]:
        return sorted({f.K for f in self.folds})

    @property
    def n_points(self) -> int:
        return sum(f.n_test for f in self.folds)

    def style_accuracy(self, style: StyleLabel) -> Optional[tuple[float, float, float]]:
        """(mean, min, max) across folds, or None if no fold held the style."""
        values = [f.accuracy[style] for f in self.folds if f.accuracy[style] is not None]
        if not values:
            return None
        return statistics.fmean(values), min(values), max(values)

    @property
    def time_s(self) -> float:
        """Mean fold time of the fastest repeat."""
        repeats = len(self.folds[0].times)
        return min(statistics.fmean(f.times[r] for f in self.folds) for r in range(repeats))

    @property
    def t0_ms(self) -> float:
        """Per-point time of the fastest repeat."""
        repeats = len(self.folds[0].times)
        return min(
            sum(f.times[r] for f in self.folds) / self.n_points * 1000 for r in range(repeats)
        )

    @property
    def distance_evals(self) -> int:
        return sum(f.distance_evals for f in self.folds)


@dataclass(frozen=True)
class Comparison:
    """A method measured against the plain KNN baseline on the same folds."""

    speedup: float
    time_reduction: float
    eval_reduction: float


def compare(report: EvalReport, baseline: EvalReport) -> Comparison:
    speedup = baseline.t0_ms / report.t0_ms if report.t0_ms > 0 else float("inf")
    return Comparison(
        speedup=speedup,
        time_reduction=1 - 1 / speedup,
        eval_reduction=1 - report.distance_evals / baseline.distance_evals,
    )


def benchmark(
    method: str,
    data: Dataset,
    p: int = 4,
    k: int = 2,
    seed: int = 0,
    repeats: int = 3,
    K: Optional[int] = None,
    vote: str = "weighted",
) -> EvalReport:
    """Train on p-1 folds, recognize the held-out fold, for every fold.

    Training is not timed. Each fold's recognition runs ``repeats`` times as one
    batch and is timed as a whole.
    """
    validate_choice(method, METHODS, "method")
    validate_positive_int(repeats, "repeats")
    folds = kfold_split(len(data), p, seed)
    warm_up()

    results = []
    for i, test_index in enumerate(folds):
        train_index = np.sort(np.concatenate([f for j, f in enumerate(folds) if j != i]))
        train, test = data.subset(train_index), data.subset(test_index)
        if method == "knn":
            model = knn_fit(train, K)
            recognize = partial(knn_classify_batch, model, test.features, vote)
        else:
            model = kmcknn_train(train, k, seed=seed, K=K)
            recognize = partial(kmcknn_recognize_batch, model, test.features, vote)

        times = []
        for _ in range(repeats):
            start = time.perf_counter()
            recognition = recognize()
            times.append(time.perf_counter() - start)

        fold = FoldResult(
            fold=i,
            n_train=len(train),
            n_test=len(test),
            K=model.K,
            accuracy=accuracy(recognition.labels, test.labels),
            times=times,
            distance_evals=recognition.distance_evals,
        )
        logger.info(
            f"{method} fold {i}: "
            + ", ".join(
                f"{s.value}={fold.accuracy[s]:.4f}" for s in STYLES if fold.accuracy[s] is not None
            )
            + f", T0={fold.t0_ms:.4f} ms"
        )
        results.append(fold)

    return EvalReport(
        method=method,
        k=k if method == "kmcknn" else None,
        p=p,
        seed=seed,
        vote=vote,
        folds=results,
    )
