"""Input validation utilities and the shared error types."""

import math
from typing import Optional, Sequence


class ValidationError(Exception):
    """Raised when a parameter or precondition check fails."""

    pass


class DataError(Exception):
    """Raised when an input file or dataset is malformed."""

    pass


class NumericError(Exception):
    """Raised when a numeric procedure cannot produce a valid result."""

    pass


def validate_positive_int(value: int, name: str) -> int:
    """Validate a strictly positive integer parameter."""
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ValidationError(f"{name} must be a positive integer, got {value!r}")
    return value


def validate_quantization(q: Sequence[int], dims: int = 3) -> tuple[int, ...]:
    """Validate per-dimension quantization levels."""
    q = tuple(q)
    if len(q) != dims:
        raise ValidationError(f"Expected {dims} quantization levels, got {len(q)}")
    for level in q:
        validate_positive_int(level, "q")
    return q


def validate_radius(r: int) -> int:
    """Validate a morphology kernel radius."""
    if isinstance(r, bool) or not isinstance(r, int) or r < 0:
        raise ValidationError(f"Kernel radius must be a non-negative integer, got {r!r}")
    return r


def validate_fraction(value: float, name: str, upper: float = 1.0) -> float:
    """Validate a ratio in [0, upper)."""
    if not math.isfinite(value) or value < 0 or value >= upper:
        raise ValidationError(f"{name} must be in [0, {upper}), got {value}")
    return float(value)


def validate_connectivity(connectivity: int) -> int:
    """Validate a 3-D voxel connectivity."""
    if connectivity not in (6, 18, 26):
        raise ValidationError(f"Connectivity must be 6, 18 or 26, got {connectivity}")
    return connectivity


def validate_folds(n: int, p: int) -> int:
    """Validate the fold count for p-fold cross-validation."""
    if p < 2:
        raise ValidationError(f"Fold count must be at least 2, got {p}")
    if p > n:
        raise ValidationError(f"Fold count {p} exceeds sample count {n}")
    return p


def validate_neighbors(K: Optional[int], n_train: int) -> int:
    """Validate the KNN neighbor count; None means floor(sqrt(N))."""
    if n_train < 1:
        raise ValidationError("Training set is empty")
    if K is None:
        return max(1, math.isqrt(n_train))
    validate_positive_int(K, "K")
    if K > n_train:
        raise ValidationError(f"K={K} exceeds training size {n_train}")
    return K


def validate_choice(value: str, choices: Sequence[str], name: str) -> str:
    """Validate a string option against its allowed values."""
    if value not in choices:
        raise ValidationError(f"Invalid {name}: {value!r} (expected one of {', '.join(choices)})")
    return value
