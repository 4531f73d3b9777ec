"""Feature-space types, normalization and decision-point extraction."""

from .extraction import DECISION_THRESHOLD, NoLaneChangeError, extract_decision_point
from .normalization import (
    DegenerateDimensionError,
    denormalize,
    normalize,
    normalize_with,
    quantize,
    quantize_dataset,
)
from .types import (
    ALL_LABELS,
    FEATURE_NAMES,
    STYLES,
    Dataset,
    Extrema,
    FeatureVector,
    ScenarioFrame,
    StyleLabel,
)
