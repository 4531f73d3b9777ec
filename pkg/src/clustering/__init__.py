"""Morphology-based clustering, k-means and the hierarchical clustering baseline."""

from .ahc import AhcResult, ahc_fit, cluster_proximity
from .kmeans import KMeansModel, kmeans_assign, kmeans_fit
from .morphology import (
    BinaryVolume,
    ClusteringError,
    MorphClustering,
    SphericalKernel,
    dilate,
    erode,
    morph_cluster,
    rasterize,
)
from .summary import name_styles, render_cluster_report

__all__ = [
    "AhcResult",
    "BinaryVolume",
    "ClusteringError",
    "KMeansModel",
    "MorphClustering",
    "SphericalKernel",
    "ahc_fit",
    "cluster_proximity",
    "dilate",
    "erode",
    "kmeans_assign",
    "kmeans_fit",
    "morph_cluster",
    "name_styles",
    "rasterize",
    "render_cluster_report",
]
