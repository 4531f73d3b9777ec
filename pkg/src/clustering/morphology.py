"""Binary morphology on quantized feature volumes and morphology-based clustering."""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import ndimage
from scipy.signal import fftconvolve

from ..features.normalization import normalize, normalize_with, quantize
from ..features.types import Dataset, Extrema, StyleLabel
from ..utils.validators import (
    NumericError,
    ValidationError,
    validate_connectivity,
    validate_fraction,
    validate_quantization,
    validate_radius,
)
from .summary import canonical_order, cluster_ranges, name_styles

logger = logging.getLogger(__name__)

# 3-D neighborhood size -> ndimage.generate_binary_structure rank
CONNECTIVITY_RANK = {6: 1, 18: 2, 26: 3}


class ClusteringError(NumericError):
    """Raised when clustering finds no usable cluster."""

    pass


@dataclass(frozen=True, eq=False)
class BinaryVolume:
    """Occupancy grid addressed by 1-based integer coordinates.

    Cell ``(c1, ..., cI)`` lives at ``occupancy[c1 - 1, ..., cI - 1]``; reads outside
    the grid are empty.
    """

    occupancy: np.ndarray

    def __post_init__(self):
        occupancy = np.asarray(self.occupancy, dtype=bool)
        object.__setattr__(self, "occupancy", occupancy)

    @classmethod
    def empty(cls, dims: Sequence[int]) -> "BinaryVolume":
        return cls(np.zeros(tuple(dims), dtype=bool))

    @classmethod
    def from_coords(cls, coords: np.ndarray, dims: Sequence[int]) -> "BinaryVolume":
        """Volume with the given (M, I) 1-based coordinates set."""
        occupancy = np.zeros(tuple(dims), dtype=bool)
        coords = np.asarray(coords, dtype=np.int64).reshape(-1, len(dims))
        if len(coords):
            if np.any(coords < 1) or np.any(coords > np.asarray(dims)):
                raise ValidationError("Coordinate outside the volume")
            occupancy[tuple((coords - 1).T)] = True
        return cls(occupancy)

    @property
    def dims(self) -> tuple[int, ...]:
        return self.occupancy.shape

    def __getitem__(self, coord: Sequence[int]) -> bool:
        index = tuple(int(c) - 1 for c in coord)
        if any(i < 0 or i >= d for i, d in zip(index, self.dims)):
            return False
        return bool(self.occupancy[index])

    def count(self) -> int:
        return int(self.occupancy.sum())

    def coords(self) -> np.ndarray:
        """1-based coordinates of the set cells, shape (M, I)."""
        return np.argwhere(self.occupancy) + 1

    def complement(self) -> "BinaryVolume":
        return BinaryVolume(~self.occupancy)

    def issubset(self, other: "BinaryVolume") -> bool:
        return not np.any(self.occupancy & ~other.occupancy)


@dataclass(frozen=True)
class SphericalKernel:
    """Cells at integer offsets ``o`` with ``||o||_2 <= radius``, centered on the origin."""

    radius: int
    ndim: int = 3

    def __post_init__(self):
        validate_radius(self.radius)

    @property
    def size(self) -> int:
        return 2 * self.radius + 1

    @property
    def mask(self) -> np.ndarray:
        offsets = np.indices((self.size,) * self.ndim) - self.radius
        return (offsets**2).sum(axis=0) <= self.radius**2

    def offsets(self) -> np.ndarray:
        return np.argwhere(self.mask) - self.radius


def _check_kernel(a: BinaryVolume, b: SphericalKernel) -> None:
    if a.occupancy.ndim != b.ndim:
        raise ValidationError(f"Kernel is {b.ndim}-D but the volume is {a.occupancy.ndim}-D")
    if b.size >= min(a.dims):
        raise ValidationError(
            f"Kernel radius {b.radius} too large for volume {a.dims} (need 2r+1 < min dim)"
        )


def _overlap_counts(a: BinaryVolume, b: SphericalKernel) -> np.ndarray:
    """Number of set cells of ``a`` under the kernel placed at each cell.

    Zero padding of the convolution gives the empty-outside convention.
    """
    if not a.occupancy.any():
        return np.zeros(a.dims, dtype=np.int64)
    counts = fftconvolve(a.occupancy.astype(np.float64), b.mask.astype(np.float64), mode="same")
    return np.rint(counts).astype(np.int64)


def dilate(a: BinaryVolume, b: SphericalKernel) -> BinaryVolume:
    """Cells where the kernel overlaps at least one set cell of ``a``."""
    _check_kernel(a, b)
    return BinaryVolume(_overlap_counts(a, b) > 0)


def erode(a: BinaryVolume, b: SphericalKernel) -> BinaryVolume:
    """Cells where the kernel lies entirely inside ``a``."""
    _check_kernel(a, b)
    return BinaryVolume(_overlap_counts(a, b) == int(b.mask.sum()))


def rasterize(data: Dataset, q: Sequence[int]) -> BinaryVolume:
    """Set the cell of every quantized sample in a (q1+1, q2+1, q3+1) volume."""
    q = validate_quantization(q)
    coords = quantize(normalize(data), q)
    return BinaryVolume.from_coords(coords, tuple(level + 1 for level in q))


def assign_nearest(normalized: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Index of the nearest center for each row; ties go to the lowest index."""
    diffs = normalized[:, None, :] - centers[None, :, :]
    return np.argmin((diffs**2).sum(axis=2), axis=1)


@dataclass(frozen=True, eq=False)
class MorphClustering:
    """Result of morphology-based clustering.

    ``labels`` holds a cluster index per sample, or -1 for noise. Clusters are
    ordered lexicographically by center.
    """

    component_voxels: list[np.ndarray]
    centers: np.ndarray  # (J, 3), physical units
    ranges: np.ndarray  # (J, 3, 2), physical units
    counts: np.ndarray
    labels: np.ndarray
    noise_indices: np.ndarray
    extrema: Extrema

    @property
    def J(self) -> int:
        return len(self.centers)

    @property
    def style_names(self) -> Optional[list[StyleLabel]]:
        return name_styles(self.centers)

    def label_names(self) -> list[str]:
        """Per-sample label text: style names when J == 3, otherwise cluster indices."""
        names = self.style_names
        result = []
        for label in self.labels:
            if label < 0:
                result.append(StyleLabel.NOISE.value)
            elif names is not None:
                result.append(names[label].value)
            else:
                result.append(str(int(label)))
        return result

    def styled_dataset(self, data: Dataset) -> Dataset:
        """The input samples labeled by style; requires exactly three clusters."""
        names = self.style_names
        if names is None:
            raise ClusteringError(f"Cannot name styles for {self.J} clusters")
        codes = np.array(
            [StyleLabel.NOISE.code if j < 0 else names[j].code for j in self.labels],
            dtype=np.int64,
        )
        return Dataset(data.features, codes)


def morph_cluster(
    data: Dataset,
    q: Sequence[int] = (100, 100, 100),
    r: int = 10,
    noise_fraction: float = 0.02,
    connectivity: int = 26,
) -> MorphClustering:
    """Cluster samples by dilating then eroding their quantized occupancy volume.

    Components of the closed volume holding fewer than ``noise_fraction * N``
    samples are discarded along with their samples. Centers are the physical-unit
    means of each surviving component's samples, and every remaining sample goes
    to its nearest center in normalized space.
    """
    q = validate_quantization(q)
    validate_radius(r)
    if r < 1:
        raise ValidationError(f"Kernel radius must be >= 1, got {r}")
    validate_fraction(noise_fraction, "noise_fraction", upper=0.5)
    validate_connectivity(connectivity)

    n = len(data)
    normalized = normalize(data)
    coords = quantize(normalized, q)
    volume = BinaryVolume.from_coords(coords, tuple(level + 1 for level in q))

    closed = erode(dilate(volume, SphericalKernel(r)), SphericalKernel(r + 1))
    structure = ndimage.generate_binary_structure(3, CONNECTIVITY_RANK[connectivity])
    components, n_components = ndimage.label(closed.occupancy, structure=structure)
    logger.info(
        f"Morphology q={q} r={r}: {volume.count()} occupied cells, "
        f"{closed.count()} after closing, {n_components} components"
    )

    # component id per sample; 0 means the sample's cell did not survive erosion
    sample_component = components[tuple((coords - 1).T)]
    sizes = np.bincount(sample_component, minlength=n_components + 1)
    min_count = max(noise_fraction * n, 1)
    kept = [c for c in range(1, n_components + 1) if sizes[c] >= min_count]
    dropped = [c for c in range(1, n_components + 1) if c not in kept]

    if not kept:
        raise ClusteringError(
            f"No clusters found (q={q}, r={r}, noise_fraction={noise_fraction}, "
            f"connectivity={connectivity}, {n_components} components before noise removal)"
        )

    noise_mask = np.isin(sample_component, dropped)
    centers = np.array([data.features[sample_component == c].mean(axis=0) for c in kept])
    voxels = [np.argwhere(components == c) + 1 for c in kept]

    order = canonical_order(centers)
    centers = centers[order]
    voxels = [voxels[i] for i in order]

    labels = np.full(n, -1, dtype=np.int64)
    members = np.flatnonzero(~noise_mask)
    normalized_centers = normalize_with(centers, data.extrema)
    labels[members] = assign_nearest(normalized[members], normalized_centers)

    counts = np.bincount(labels[members], minlength=len(centers))
    noise_indices = np.flatnonzero(noise_mask)
    if len(noise_indices):
        logger.info(f"Discarded {len(dropped)} components holding {len(noise_indices)} samples")

    return MorphClustering(
        component_voxels=voxels,
        centers=centers,
        ranges=cluster_ranges(data.features, labels, len(centers)),
        counts=counts,
        labels=labels,
        noise_indices=noise_indices,
        extrema=data.extrema,
    )
