"""Self-describing text format for trained recognizers.

Layout::

    lanestyle-model v1
    method = kmcknn
    k = 2
    K = 99
    vote = weighted
    lower = <dd> <dv> <da>
    upper = <dd> <dv> <da>
    subcluster moderate 0
    center = <dd> <dv> <da>
    member <index> <dd> <dv> <da>
    ...

Plain KNN models (``method = knn``) list ``sample <index> <label> <dd> <dv> <da>``
lines instead of sub-cluster blocks. Centers are normalized, members physical. Floats
use ``repr`` so a written model reads back bit-identical.
"""

from pathlib import Path
from typing import Optional, Union

import numpy as np

from ..features.normalization import normalize_with
from ..features.types import STYLES, Extrema, StyleLabel
from ..utils.validators import DataError, ValidationError, validate_choice
from .kmc_knn import KmcKnnModel, SubCluster
from .knn import KnnModel
from .scan import VOTE_RULES

MAGIC = "lanestyle-model v1"
METHODS = ("knn", "kmcknn")

Model = Union[KnnModel, KmcKnnModel]


def _floats(values) -> str:
    return " ".join(repr(float(v)) for v in values)


def render_model(model: Model, vote: str = "weighted") -> str:
    """Render a trained model as text."""
    validate_choice(vote, VOTE_RULES, "vote rule")
    lines = [MAGIC]
    if isinstance(model, KmcKnnModel):
        lines += ["method = kmcknn", f"k = {model.k}"]
    else:
        lines.append("method = knn")
    lines += [
        f"K = {model.K}",
        f"vote = {vote}",
        f"lower = {_floats(model.extrema.lower)}",
        f"upper = {_floats(model.extrema.upper)}",
    ]
    if isinstance(model, KmcKnnModel):
        counters = {style: 0 for style in STYLES}
        for sub in model.subclusters:
            lines.append(f"subcluster {sub.style.value} {counters[sub.style]}")
            counters[sub.style] += 1
            lines.append(f"center = {_floats(sub.center)}")
            for index, row in zip(sub.member_index, sub.members):
                lines.append(f"member {int(index)} {_floats(row)}")
    else:
        for index, (label, row) in enumerate(zip(model.train_labels, model.train_features)):
            lines.append(f"sample {index} {STYLES[label].value} {_floats(row)}")
    return "\n".join(lines) + "\n"


class _Parser:
    """Line cursor that reports 1-based line numbers in errors."""

    def __init__(self, text: str, source: str):
        self.lines = text.splitlines()
        self.source = source
        self.pos = 0

    def error(self, message: str, line: Optional[int] = None) -> DataError:
        line = self.pos if line is None else line
        return DataError(f"{self.source}, line {line}: {message}")

    def next(self) -> str:
        if self.pos >= len(self.lines):
            raise self.error("unexpected end of file", self.pos)
        self.pos += 1
        return self.lines[self.pos - 1].strip()

    def peek(self) -> str:
        return self.lines[self.pos].strip() if self.pos < len(self.lines) else ""

    def header(self, key: str) -> str:
        line = self.next()
        name, sep, value = line.partition("=")
        if not sep or name.strip() != key:
            raise self.error(f"expected '{key} = ...', got {line!r}")
        return value.strip()

    def integer(self, text: str) -> int:
        try:
            return int(text)
        except ValueError:
            raise self.error(f"invalid integer {text!r}")

    def floats(self, text: str, count: int) -> np.ndarray:
        parts = text.split()
        if len(parts) != count:
            raise self.error(f"expected {count} values, got {len(parts)}")
        try:
            values = np.array([float(p) for p in parts], dtype=np.float64)
        except ValueError:
            raise self.error(f"invalid number in {text!r}")
        if not np.all(np.isfinite(values)):
            raise self.error("non-finite value")
        return values

    def style(self, text: str) -> StyleLabel:
        try:
            style = StyleLabel.parse(text)
        except ValidationError as e:
            raise self.error(str(e))
        if style not in STYLES:
            raise self.error(f"models cannot hold {style.value} samples")
        return style


def parse_model(text: str, source: str = "<model>") -> tuple[Model, str]:
    """Parse model text; returns the model and its vote rule."""
    p = _Parser(text, source)
    if p.next() != MAGIC:
        raise p.error(f"not a model file (expected {MAGIC!r})")
    method = p.header("method")
    if method not in METHODS:
        raise p.error(f"unknown method {method!r}")
    k = p.integer(p.header("k")) if method == "kmcknn" else None
    K = p.integer(p.header("K"))
    vote = p.header("vote")
    if vote not in VOTE_RULES:
        raise p.error(f"unknown vote rule {vote!r}")
    extrema = Extrema(p.floats(p.header("lower"), 3), p.floats(p.header("upper"), 3))

    try:
        if method == "knn":
            model = _parse_knn(p, extrema, K)
        else:
            model = _parse_kmcknn(p, extrema, k, K)
    except ValidationError as e:
        raise DataError(f"{source}: {e}")
    return model, vote


def _parse_knn(p: _Parser, extrema: Extrema, K: int) -> KnnModel:
    labels, rows = [], []
    while p.peek():
        parts = p.next().split()
        if len(parts) != 6 or parts[0] != "sample":
            raise p.error("expected 'sample <index> <label> <dd> <dv> <da>'")
        if p.integer(parts[1]) != len(rows):
            raise p.error(f"sample index {parts[1]} out of order")
        labels.append(STYLES.index(p.style(parts[2])))
        rows.append(p.floats(" ".join(parts[3:]), 3))
    if not rows:
        raise p.error("model has no samples")
    if not 1 <= K <= len(rows):
        raise DataError(f"{p.source}: K={K} out of range for {len(rows)} samples")
    features = np.array(rows)
    return KnnModel(
        train_features=features,
        train_normalized=np.ascontiguousarray(normalize_with(features, extrema)),
        train_labels=np.array(labels, dtype=np.int64),
        extrema=extrema,
        K=K,
    )


def _parse_kmcknn(p: _Parser, extrema: Extrema, k: int, K: int) -> KmcKnnModel:
    subclusters = []
    while p.peek():
        parts = p.next().split()
        if len(parts) != 3 or parts[0] != "subcluster":
            raise p.error("expected 'subcluster <style> <index>'")
        style = p.style(parts[1])
        center = p.floats(p.header("center"), 3)
        index, members = [], []
        while p.peek().startswith("member "):
            fields = p.next().split()
            if len(fields) != 5:
                raise p.error("expected 'member <index> <dd> <dv> <da>'")
            index.append(p.integer(fields[1]))
            members.append(p.floats(" ".join(fields[2:]), 3))
        if not members:
            raise p.error(f"sub-cluster {parts[1]} {parts[2]} has no members")
        subclusters.append(
            SubCluster(
                style=style,
                center=center,
                member_index=np.array(index, dtype=np.int64),
                members=np.array(members),
            )
        )
    if not subclusters:
        raise p.error("model has no sub-clusters")
    n_train = sum(len(sub) for sub in subclusters)
    if not 1 <= K <= n_train:
        raise DataError(f"{p.source}: K={K} out of range for {n_train} samples")
    return KmcKnnModel(subclusters=subclusters, extrema=extrema, k=k, K=K)


def read_model(path: Union[str, Path]) -> tuple[Model, str]:
    path = Path(path)
    if not path.exists():
        raise DataError(f"Model file not found: {path}")
    return parse_model(path.read_text(), str(path))
