"""Atomic file output."""

import os
import tempfile
from pathlib import Path
from typing import Mapping, Union

PathLike = Union[str, Path]


def write_text_atomic(path: PathLike, text: str) -> Path:
    """Write ``text`` to ``path`` through a temp file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise
    return path


def write_all_atomic(outputs: Mapping[PathLike, str]) -> list[Path]:
    """Write several rendered artifacts; nothing is written until all are rendered."""
    return [write_text_atomic(path, text) for path, text in outputs.items()]
