"""Style recognizers: plain KNN and kMC-KNN, plus their model file."""

from .kmc_knn import (
    KmcKnnModel,
    SubCluster,
    kmcknn_recognize,
    kmcknn_recognize_batch,
    kmcknn_select,
    kmcknn_train,
)
from .knn import KnnModel, Recognition, knn_classify, knn_classify_batch, knn_fit, sim
from .model_file import parse_model, read_model, render_model
from .scan import VOTE_RULES, warm_up

__all__ = [
    "KmcKnnModel",
    "KnnModel",
    "Recognition",
    "SubCluster",
    "VOTE_RULES",
    "kmcknn_recognize",
    "kmcknn_recognize_batch",
    "kmcknn_select",
    "kmcknn_train",
    "knn_classify",
    "knn_classify_batch",
    "knn_fit",
    "parse_model",
    "read_model",
    "render_model",
    "sim",
    "warm_up",
]
