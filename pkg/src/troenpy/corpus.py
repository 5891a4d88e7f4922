"""
Corpus ingestion, tokenization, term/class statistics and seeded splitting.

Three on-disk layouts are understood:

* ``jsonl``: one ``{"label": ..., "text": ...}`` object per line (an optional
  ``"id"`` field overrides the line-number id);
* ``tsv``: ``label<TAB>text`` per line;
* ``class-dirs``: a directory holding one sub-directory per class, each
  containing plain-text documents.

All statistics used for weighting come from :func:`build_table`, which makes
a single pass over the documents and records presence counts only.
"""
from __future__ import annotations

import json
import math
import os
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import IngestionError, SchemaError, SplitError, VocabularyError

FORMATS = ("jsonl", "tsv", "class-dirs")

_ALNUM_RUN = re.compile(r"[^\W_]+")


# --------------------------------------------------------------------------
# tokenization
# --------------------------------------------------------------------------


def load_stopwords(path: str | os.PathLike | None = None) -> frozenset[str]:
    """Read a newline-delimited stop list; ``None`` loads the bundled English list."""
    if path is None:
        text = resources.files("troenpy").joinpath("data/stopwords_en.txt").read_text("utf-8")
    else:
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise IngestionError(f"cannot read stop-word file {path}: {exc}") from exc
    return frozenset(w.strip().lower() for w in text.splitlines() if w.strip())


@dataclass(frozen=True)
class TokenizerConfig:
    stopwords: frozenset = frozenset()
    min_length: int = 2


def tokenize(text: str, config: TokenizerConfig | None = None) -> list[str]:
    """Lowercase `text`, split on non-alphanumeric runs, drop short tokens and stop words.

    >>> tokenize("The cat, the CAT!", TokenizerConfig(stopwords=frozenset({"the"})))
    ['cat', 'cat']
    """
    config = config or TokenizerConfig()
    stop = config.stopwords
    return [
        tok
        for tok in _ALNUM_RUN.findall(text.lower())
        if len(tok) >= config.min_length and tok not in stop
    ]


# --------------------------------------------------------------------------
# documents and corpora
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Document:
    id: str
    label: str
    label_index: int
    tokens: tuple
    tf: dict = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if self.tf is None:
            object.__setattr__(self, "tf", dict(Counter(self.tokens)))


class LabeledCorpus:
    """An immutable list of labelled documents sharing one label space.

    ``class_names`` is fixed at construction, so sub-corpora produced by
    :func:`split` keep the parent's K even when a class is absent from one side.
    """

    def __init__(self, documents: Sequence[Document], class_names: Sequence[str]):
        self.documents = tuple(documents)
        self.class_names = tuple(class_names)
        K = len(self.class_names)
        for doc in self.documents:
            if not 0 <= doc.label_index < K or self.class_names[doc.label_index] != doc.label:
                raise SchemaError(f"document {doc.id!r} has label {doc.label!r} outside the class list")

    def __len__(self):
        return len(self.documents)

    def __iter__(self):
        return iter(self.documents)

    def __getitem__(self, i):
        return self.documents[i]

    def __repr__(self):
        return f"LabeledCorpus(n={len(self)}, K={self.n_classes})"

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    @cached_property
    def labels(self) -> np.ndarray:
        return np.array([d.label_index for d in self.documents], dtype=np.int64)

    @cached_property
    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes).astype(np.int64)

    @property
    def ids(self) -> list[str]:
        return [d.id for d in self.documents]

    def subset(self, indices: Iterable[int]) -> "LabeledCorpus":
        return LabeledCorpus([self.documents[i] for i in indices], self.class_names)

    @classmethod
    def from_records(
        cls,
        records: Iterable[tuple],
        tokenizer: TokenizerConfig | None = None,
        class_names: Sequence[str] | None = None,
    ) -> "LabeledCorpus":
        """Build a corpus from ``(id, label, text)`` triples.

        Class names default to the sorted set of observed labels.
        """
        records = list(records)
        if class_names is None:
            class_names = sorted({label for _, label, _ in records})
        index = {name: i for i, name in enumerate(class_names)}
        docs = []
        for doc_id, label, text in records:
            if label not in index:
                raise SchemaError(f"record {doc_id!r}: label {label!r} not in class list")
            docs.append(Document(doc_id, label, index[label], tokenize(text, tokenizer)))
        return cls(docs, class_names)


# --------------------------------------------------------------------------
# loading
# --------------------------------------------------------------------------


def _infer_format(path: Path) -> str:
    if path.is_dir():
        return "class-dirs"
    suffix = path.suffix.lower()
    if suffix in (".jsonl", ".json", ".ndjson"):
        return "jsonl"
    if suffix in (".tsv", ".txt"):
        return "tsv"
    raise IngestionError(f"cannot infer corpus format of {path}; pass format explicitly")


def _read_lines(path: Path):
    try:
        with open(path, encoding="utf-8") as fh:
            yield from enumerate(fh, start=1)
    except UnicodeDecodeError as exc:
        raise IngestionError(f"{path}: not valid UTF-8 ({exc})") from exc
    except OSError as exc:
        raise IngestionError(f"cannot read {path}: {exc}") from exc


def _jsonl_records(path: Path, label_field: str, text_field: str):
    for lineno, line in _read_lines(path):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise IngestionError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from exc
        if not isinstance(obj, dict):
            raise IngestionError(f"{path}:{lineno}: expected a JSON object")
        if label_field not in obj:
            raise SchemaError(f"{path}:{lineno}: missing label field {label_field!r}")
        text = obj.get(text_field, "")
        if not isinstance(text, str):
            raise SchemaError(f"{path}:{lineno}: field {text_field!r} is not a string")
        yield str(obj.get("id", f"line{lineno}")), str(obj[label_field]), text


def _tsv_records(path: Path):
    for lineno, line in _read_lines(path):
        line = line.rstrip("\r\n")
        if not line.strip():
            continue
        label, sep, text = line.partition("\t")
        if not sep:
            raise IngestionError(f"{path}:{lineno}: expected 'label<TAB>text'")
        if not label:
            raise SchemaError(f"{path}:{lineno}: empty label")
        yield f"line{lineno}", label, text


def _class_dir_records(path: Path):
    class_dirs = sorted(p for p in path.iterdir() if p.is_dir() and not p.name.startswith("."))
    if not class_dirs:
        raise IngestionError(f"{path}: no class sub-directories")
    for cdir in class_dirs:
        for f in sorted(p for p in cdir.iterdir() if p.is_file() and not p.name.startswith(".")):
            try:
                text = f.read_text(encoding="utf-8")
            except UnicodeDecodeError as exc:
                raise IngestionError(f"{f}: not valid UTF-8 ({exc})") from exc
            yield f"{cdir.name}/{f.name}", cdir.name, text


def read_records(
    path: str | os.PathLike,
    format: str | None = None,
    label_field: str = "label",
    text_field: str = "text",
) -> list[tuple[str, str, str]]:
    """Parse a corpus file into ``(id, label, raw_text)`` triples."""
    path = Path(path)
    if not path.exists():
        raise IngestionError(f"corpus path does not exist: {path}")
    format = format or _infer_format(path)
    if format == "jsonl":
        return list(_jsonl_records(path, label_field, text_field))
    if format == "tsv":
        return list(_tsv_records(path))
    if format == "class-dirs":
        if not path.is_dir():
            raise IngestionError(f"class-dirs format needs a directory, got {path}")
        return list(_class_dir_records(path))
    raise SchemaError(f"unknown corpus format {format!r}; expected one of {FORMATS}")


def load_corpus(
    path: str | os.PathLike,
    format: str | None = None,
    tokenizer: TokenizerConfig | None = None,
    **fields,
) -> LabeledCorpus:
    """Load and tokenize a labelled corpus; class names are sorted lexicographically."""
    return LabeledCorpus.from_records(read_records(path, format, **fields), tokenizer)


def load_predefined_split(
    train_path, test_path, format: str | None = None, tokenizer: TokenizerConfig | None = None, **fields
) -> tuple[LabeledCorpus, LabeledCorpus]:
    """Load a shipped train/test pair into one shared label space."""
    train_rec = read_records(train_path, format, **fields)
    test_rec = read_records(test_path, format, **fields)
    names = sorted({r[1] for r in train_rec} | {r[1] for r in test_rec})
    return (
        LabeledCorpus.from_records(train_rec, tokenizer, names),
        LabeledCorpus.from_records(test_rec, tokenizer, names),
    )


# --------------------------------------------------------------------------
# statistics
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TermClassTable:
    """Presence counts per term and per (term, class), plus global class counts.

    ``class_doc_freq[j, i]`` is the number of class-``i`` documents containing
    ``vocab[j]``; ``doc_freq`` is its row sum.
    """

    vocab: tuple
    n: int
    class_counts: np.ndarray
    doc_freq: np.ndarray
    class_doc_freq: np.ndarray
    class_names: tuple = ()

    def __post_init__(self):
        for arr in (self.class_counts, self.doc_freq, self.class_doc_freq):
            arr.setflags(write=False)

    @cached_property
    def index(self) -> dict[str, int]:
        return {w: j for j, w in enumerate(self.vocab)}

    @property
    def n_terms(self) -> int:
        return len(self.vocab)

    @property
    def n_classes(self) -> int:
        return int(self.class_counts.size)

    def term_index(self, w: str) -> int:
        try:
            return self.index[w]
        except KeyError:
            raise VocabularyError(w) from None

    def __contains__(self, w):
        return w in self.index


def build_table(corpus: LabeledCorpus, min_df: int = 1) -> TermClassTable:
    """Count document presence of every term, overall and per class, in one pass."""
    if min_df < 1:
        raise ValueError("min_df must be >= 1")
    K = corpus.n_classes
    term_ids: dict[str, int] = {}
    cols: list[int] = []
    labels: list[int] = []
    for doc in corpus.documents:
        for w in doc.tf:
            cols.append(term_ids.setdefault(w, len(term_ids)))
            labels.append(doc.label_index)

    counts = np.zeros((len(term_ids), K), dtype=np.int64)
    np.add.at(counts, (np.asarray(cols, dtype=np.int64), np.asarray(labels, dtype=np.int64)), 1)
    df = counts.sum(axis=1)

    keep = sorted(w for w, j in term_ids.items() if df[j] >= min_df)
    order = np.array([term_ids[w] for w in keep], dtype=np.int64)
    counts = counts[order] if order.size else np.zeros((0, K), dtype=np.int64)
    return TermClassTable(
        vocab=tuple(keep),
        n=len(corpus),
        class_counts=corpus.class_counts.copy(),
        doc_freq=counts.sum(axis=1),
        class_doc_freq=counts,
        class_names=corpus.class_names,
    )


# --------------------------------------------------------------------------
# splitting
# --------------------------------------------------------------------------


def holdout_size(n: int, test_fraction: float) -> int:
    """``round(n * test_fraction)`` with halves rounded up."""
    return int(math.floor(n * test_fraction + 0.5))


def split(corpus: LabeledCorpus, test_fraction: float, seed: int) -> tuple[LabeledCorpus, LabeledCorpus]:
    """Seeded uniform train/test partition.

    The permutation comes from numpy's PCG64 bit generator, so a given
    ``(seed, corpus order)`` reproduces the same split everywhere. Both
    sides keep the original document order.
    """
    if not 0.0 < test_fraction < 1.0:
        raise SplitError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    n = len(corpus)
    n_test = holdout_size(n, test_fraction)
    if n < 2 or n_test == 0 or n_test == n:
        raise SplitError(f"fraction {test_fraction} of {n} documents leaves an empty side")
    perm = np.random.Generator(np.random.PCG64(seed)).permutation(n)
    test_idx = np.sort(perm[:n_test])
    train_idx = np.sort(perm[n_test:])
    return corpus.subset(train_idx.tolist()), corpus.subset(test_idx.tolist())

