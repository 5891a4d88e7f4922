"""Find benchmark corpora laid out under a local data directory.

Each dataset lives in its own folder, ``<root>/<name>/``, in one of two
shapes::

    r8/train.tsv + r8/test.tsv      shipped split (any readable format,
    r8/train/    + r8/test/         or class directories)

    bbcsport/corpus.jsonl           single corpus, split at random
    bbcsport/corpus/                (class directories)

The root defaults to ``$TROENPY_DATA_DIR``. Nothing is downloaded.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

DATA_ENV = "TROENPY_DATA_DIR"

# folder names tried for each benchmark, in order
KNOWN = {
    "bbcsport": ("bbcsport", "bbc_sport", "bbc"),
    "twitter": ("twitter",),
    "ohsumed": ("ohsumed",),
    "amazon": ("amazon",),
    "20ng": ("20ng", "20news", "ng20", "20_newsgroups"),
    "classic": ("classic",),
    "r8": ("r8", "reuters_r8"),
}

_SUFFIXES = (".jsonl", ".tsv", "")


@dataclass(frozen=True)
class DatasetPaths:
    name: str
    train: Path
    test: Path | None = None

    @property
    def predefined(self) -> bool:
        return self.test is not None


def data_root(root: str | os.PathLike | None = None) -> Path | None:
    root = root if root is not None else os.environ.get(DATA_ENV)
    return Path(root) if root else None


def _first(folder: Path, stem: str) -> Path | None:
    for suffix in _SUFFIXES:
        p = folder / f"{stem}{suffix}"
        if p.exists():
            return p
    return None


def locate(name: str, root: str | os.PathLike | None = None) -> DatasetPaths | None:
    """Paths for dataset `name`, or None when it is not on disk."""
    base = data_root(root)
    if base is None or not base.is_dir():
        return None
    name = name.lower() if name.lower() in KNOWN else name
    for folder_name in KNOWN.get(name, (name,)):
        folder = base / folder_name
        if not folder.is_dir():
            continue
        train, test = _first(folder, "train"), _first(folder, "test")
        if train and test:
            return DatasetPaths(name, train, test)
        corpus = _first(folder, "corpus")
        if corpus:
            return DatasetPaths(name, corpus)
    return None


def available(root: str | os.PathLike | None = None) -> list[DatasetPaths]:
    return [p for p in (locate(n, root) for n in KNOWN) if p is not None]
