"""
Per-term weights and document vectorization.

Every weight is a function of the counts in a :class:`~troenpy.corpus.TermClassTable`:

``idf``
    ``1 + ln(n / (1 + n_w))``.
``pcf``
    certainty gain ``troenpy(c | w present) - troenpy(c)`` where ``c`` is the
    smoothed class distribution.
``ncf``
    the entropy analogue of ``pcf``. Exposed for analysis only.
``pi``
    ``pcf * idf``.
``cib_ncf`` / ``cib_pcf``
    class-prior-weighted log odds of smoothed document counts inside and
    outside each class (expected class information bias).

Class distributions are smoothed with pseudo-counts that total K and are
spread in proportion to the global class prior, ``p_i = (n_iw + K c_i) /
(n_w + K)``. With balanced classes this is ordinary add-one smoothing; in
general it keeps a term whose class counts are proportional to the global
counts at exactly zero certainty gain.
"""
from __future__ import annotations

import enum
import io
import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .corpus import Document, LabeledCorpus, TermClassTable, build_table
from .errors import ConfigError, DomainError
from .info import Distribution, entropy, entropy_rows, troenpy, troenpy_rows


class Block(str, enum.Enum):
    TFIDF = "tfidf"
    TFPI = "tfpi"
    BTF = "btf"
    ECIB_NCF = "ecib_ncf"
    ECIB_PCF = "ecib_pcf"

    def __str__(self):
        return self.value


_BLOCK_ALIASES = {"ecib": (Block.ECIB_NCF, Block.ECIB_PCF)}


def parse_blocks(value: str | Iterable) -> tuple[Block, ...]:
    """Turn ``"tfpi,btf,ecib"`` (or a list of names) into an ordered block tuple."""
    names = value.split(",") if isinstance(value, str) else list(value)
    blocks: list[Block] = []
    for name in names:
        if isinstance(name, Block):
            expanded = (name,)
        else:
            key = str(name).strip().lower().replace("-", "_")
            if not key:
                continue
            if key in _BLOCK_ALIASES:
                expanded = _BLOCK_ALIASES[key]
            else:
                try:
                    expanded = (Block(key),)
                except ValueError:
                    raise ConfigError(f"unknown feature block {name!r}") from None
        for b in expanded:
            if b in blocks:
                raise ConfigError(f"feature block {b.value!r} listed twice")
            blocks.append(b)
    if not blocks:
        raise ConfigError("at least one feature block is required")
    return tuple(blocks)


# --------------------------------------------------------------------------
# scalar weights
# --------------------------------------------------------------------------


def class_distribution(counts, prior=None) -> Distribution:
    """Smooth a vector of class counts into a distribution.

    Adds K pseudo-counts spread according to `prior` (uniform when omitted,
    which is plain add-one smoothing).

    >>> class_distribution([4, 0]).probs.tolist()
    [0.8333333333333334, 0.16666666666666666]
    """
    counts = np.asarray(counts, dtype=np.float64).ravel()
    K = counts.size
    if K == 0:
        raise DomainError("class counts must be non-empty")
    if np.any(counts < 0):
        raise DomainError("class counts must be non-negative")
    if prior is None:
        pseudo = np.ones(K)
    else:
        pseudo = K * Distribution(prior).probs
        if pseudo.size != K:
            raise DomainError("prior and counts differ in length")
    return Distribution((counts + pseudo) / (counts.sum() + K))


def _prior(table: TermClassTable) -> np.ndarray:
    if table.n <= 0:
        raise DomainError("table has no documents")
    return table.class_counts / table.n


def idf(table: TermClassTable, w: str) -> float:
    return 1.0 + math.log(table.n / (1.0 + table.doc_freq[table.term_index(w)]))


def pcf_weight(table: TermClassTable, w: str, clamp: bool = False) -> float:
    """Troenpy gain of the class distribution when restricted to documents containing `w`."""
    j = table.term_index(w)
    prior = _prior(table)
    gain = troenpy(class_distribution(table.class_doc_freq[j], prior)) - troenpy(
        class_distribution(table.class_counts, prior)
    )
    return max(gain, 0.0) if clamp else gain


def ncf_weight(table: TermClassTable, w: str) -> float:
    j = table.term_index(w)
    prior = _prior(table)
    return entropy(class_distribution(table.class_doc_freq[j], prior)) - entropy(
        class_distribution(table.class_counts, prior)
    )


def pi_weight(table: TermClassTable, w: str, clamp: bool = False) -> float:
    return pcf_weight(table, w, clamp) * idf(table, w)


def _cib_terms(table: TermClassTable):
    C = table.class_counts.astype(np.float64)
    n = float(table.n)
    if np.any(C >= n):
        raise DomainError("class information bias needs at least two populated classes")
    return C, n, C > 0


def cib_ncf(table: TermClassTable, w: str) -> float:
    C, n, live = _cib_terms(table)
    niw = table.class_doc_freq[table.term_index(w)].astype(np.float64)
    nw = niw.sum()
    total = 0.0
    for i in np.flatnonzero(live):
        total += (C[i] / n) * (
            math.log(C[i] / (1.0 + niw[i])) - math.log((n - C[i]) / (1.0 + nw - niw[i]))
        )
    return total


def cib_pcf(table: TermClassTable, w: str) -> float:
    C, n, live = _cib_terms(table)
    niw = table.class_doc_freq[table.term_index(w)].astype(np.float64)
    nw = niw.sum()
    total = 0.0
    for i in np.flatnonzero(live):
        total += (C[i] / n) * (
            math.log(C[i] / (1.0 + C[i] - niw[i]))
            - math.log((n - C[i]) / (1.0 + n - C[i] - nw + niw[i]))
        )
    return total


# --------------------------------------------------------------------------
# fitted model
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class WeightingModel:
    """All per-term weights for one training table, as aligned arrays."""

    table: TermClassTable
    idf: np.ndarray
    pcf: np.ndarray
    ncf: np.ndarray
    pi: np.ndarray
    cib_ncf: np.ndarray
    cib_pcf: np.ndarray
    clamp_pcf_nonneg: bool = False

    WEIGHTS = ("idf", "pcf", "pi", "cib_ncf", "cib_pcf")

    @classmethod
    def fit(cls, table: TermClassTable, clamp_pcf_nonneg: bool = False) -> "WeightingModel":
        n = float(table.n)
        K = table.n_classes
        C = table.class_counts.astype(np.float64)
        niw = table.class_doc_freq.astype(np.float64)
        nw = niw.sum(axis=1)

        idf_ = 1.0 + np.log(n / (1.0 + nw))

        prior = _prior(table)
        pseudo = K * prior
        glob = ((C + pseudo) / (C.sum() + K))[None, :]
        restricted = (niw + pseudo) / (nw + K)[:, None]
        pcf = troenpy_rows(restricted) - troenpy_rows(glob)[0]
        ncf = entropy_rows(restricted) - entropy_rows(glob)[0]
        if clamp_pcf_nonneg:
            pcf = np.maximum(pcf, 0.0)

        _, _, live = _cib_terms(table)
        Cl = C[live]
        nl = niw[:, live]
        share = Cl / n
        with np.errstate(divide="ignore"):
            cib_n = (np.log(Cl / (1.0 + nl)) - np.log((n - Cl) / (1.0 + nw[:, None] - nl))) @ share
            cib_p = (
                np.log(Cl / (1.0 + Cl - nl)) - np.log((n - Cl) / (1.0 + n - Cl - nw[:, None] + nl))
            ) @ share

        arrays = dict(idf=idf_, pcf=pcf, ncf=ncf, pi=pcf * idf_, cib_ncf=cib_n, cib_pcf=cib_p)
        for a in arrays.values():
            a.setflags(write=False)
        return cls(table=table, clamp_pcf_nonneg=clamp_pcf_nonneg, **arrays)

    @classmethod
    def fit_corpus(cls, corpus: LabeledCorpus, min_df: int = 1, clamp_pcf_nonneg: bool = False):
        return cls.fit(build_table(corpus, min_df), clamp_pcf_nonneg)

    @property
    def vocab(self) -> tuple:
        return self.table.vocab

    @property
    def n_terms(self) -> int:
        return self.table.n_terms

    def weight(self, name: str, w: str) -> float:
        if name not in self.WEIGHTS and name != "ncf":
            raise KeyError(name)
        return float(getattr(self, name)[self.table.term_index(w)])

    def to_tsv(self) -> str:
        """Weight dump with columns ``term, n_w, idf, pcf, pi, cib_ncf, cib_pcf``."""
        buf = io.StringIO()
        buf.write("term\tn_w\t" + "\t".join(self.WEIGHTS) + "\n")
        cols = [getattr(self, name) for name in self.WEIGHTS]
        for j, term in enumerate(self.vocab):
            vals = "\t".join(repr(float(c[j])) for c in cols)
            buf.write(f"{term}\t{int(self.table.doc_freq[j])}\t{vals}\n")
        return buf.getvalue()

    def dump_tsv(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(self.to_tsv())

    def block_weights(self, block: Block, pcf_on_2b: bool = False) -> np.ndarray:
        """Per-term multiplier applied to term frequency (or presence) in `block`."""
        if block is Block.TFIDF:
            return self.idf
        if block is Block.TFPI:
            return self.pi
        base = {
            Block.BTF: np.ones(self.n_terms),
            Block.ECIB_NCF: self.cib_ncf,
            Block.ECIB_PCF: self.cib_pcf,
        }[block]
        return base * self.pcf if pcf_on_2b else base


# --------------------------------------------------------------------------
# vectors
# --------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class SparseVector:
    indices: np.ndarray
    values: np.ndarray
    dim: int

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        val = np.asarray(self.values, dtype=np.float64)
        if idx.shape != val.shape:
            raise ValueError("indices and values differ in length")
        keep = val != 0.0
        idx, val = idx[keep], val[keep]
        order = np.argsort(idx, kind="stable")
        idx, val = idx[order], val[order]
        if idx.size and (idx[0] < 0 or idx[-1] >= self.dim):
            raise ValueError("index out of range")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "values", val)

    @classmethod
    def from_dense(cls, x) -> "SparseVector":
        x = np.asarray(x, dtype=np.float64).ravel()
        idx = np.flatnonzero(x)
        return cls(idx, x[idx], x.size)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.dim)
        out[self.indices] = self.values
        return out

    def norm(self) -> float:
        return float(np.sqrt(np.dot(self.values, self.values)))

    def __len__(self):
        return self.dim


def l2_normalize(v: SparseVector) -> SparseVector:
    norm = v.norm()
    if norm == 0.0:
        return v
    return SparseVector(v.indices, v.values / norm, v.dim)


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """Row-per-document CSR matrix with a block layout over its columns.

    ``layout`` holds ``(block, start, stop)`` triples that partition the
    columns in order.
    """

    matrix: sp.csr_matrix
    layout: tuple

    @property
    def blocks(self) -> tuple:
        return tuple(b for b, _, _ in self.layout)

    @property
    def shape(self):
        return self.matrix.shape

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def __len__(self):
        return self.matrix.shape[0]

    def row(self, i: int) -> SparseVector:
        r = self.matrix.getrow(i)
        return SparseVector(r.indices, r.data, self.dim)

    def rows(self):
        for i in range(len(self)):
            yield self.row(i)

    def block(self, block: Block) -> "FeatureMatrix":
        for b, start, stop in self.layout:
            if b is block:
                return FeatureMatrix(self.matrix[:, start:stop].tocsr(), ((b, 0, stop - start),))
        raise KeyError(block)

    def column_names(self, vocab: Sequence[str]) -> list[str]:
        return [f"{b.value}:{w}" for b, _, _ in self.layout for w in vocab]

    @classmethod
    def from_rows(cls, rows: Sequence[SparseVector], layout) -> "FeatureMatrix":
        dim = layout[-1][2] if layout else 0
        indptr = np.zeros(len(rows) + 1, dtype=np.int64)
        for i, r in enumerate(rows):
            if r.dim != dim:
                raise ValueError("rows disagree with the layout dimension")
            indptr[i + 1] = indptr[i] + r.indices.size
        indices = np.concatenate([r.indices for r in rows]) if rows else np.zeros(0, np.int64)
        data = np.concatenate([r.values for r in rows]) if rows else np.zeros(0)
        return cls(sp.csr_matrix((data, indices, indptr), shape=(len(rows), dim)), tuple(layout))


def _layout(blocks: Sequence[Block], m: int) -> tuple:
    return tuple((b, k * m, (k + 1) * m) for k, b in enumerate(blocks))


def vectorize(
    doc: Document, model: WeightingModel, blocks: Sequence[Block] | str, pcf_on_2b: bool = False
) -> SparseVector:
    """Weighted, per-block L2-normalized representation of one document."""
    blocks = parse_blocks(blocks)
    index = model.table.index
    m = model.n_terms
    terms = [(index[w], c) for w, c in doc.tf.items() if w in index]
    parts_idx, parts_val = [], []
    for k, block in enumerate(blocks):
        weights = model.block_weights(block, pcf_on_2b)
        if block is Block.BTF:
            vals = [weights[j] for j, _ in terms]
        else:
            vals = [c * weights[j] for j, c in terms]
        piece = l2_normalize(SparseVector([j for j, _ in terms], vals, m))
        parts_idx.append(piece.indices + k * m)
        parts_val.append(piece.values)
    return SparseVector(np.concatenate(parts_idx), np.concatenate(parts_val), m * len(blocks))


def term_frequency_matrix(corpus: LabeledCorpus | Sequence[Document], table: TermClassTable) -> sp.csr_matrix:
    """Raw counts of in-vocabulary terms, one row per document."""
    index = table.index
    indptr = [0]
    indices: list[int] = []
    data: list[float] = []
    for doc in corpus:
        for w, c in doc.tf.items():
            j = index.get(w)
            if j is not None:
                indices.append(j)
                data.append(c)
        indptr.append(len(indices))
    X = sp.csr_matrix(
        (np.asarray(data, dtype=np.float64), np.asarray(indices, dtype=np.int64), np.asarray(indptr)),
        shape=(len(indptr) - 1, table.n_terms),
    )
    X.sort_indices()
    return X


def normalize_rows(X: sp.csr_matrix) -> sp.csr_matrix:
    X = X.tocsr(copy=True)
    sq = np.asarray(X.multiply(X).sum(axis=1)).ravel()
    norms = np.sqrt(sq)
    norms[norms == 0.0] = 1.0
    X.data /= np.repeat(norms, np.diff(X.indptr))
    return X


def vectorize_corpus(
    corpus: LabeledCorpus | Sequence[Document],
    model: WeightingModel,
    blocks: Sequence[Block] | str,
    pcf_on_2b: bool = False,
) -> FeatureMatrix:
    """Batch form of :func:`vectorize`; row ``i`` equals ``vectorize(corpus[i], ...)``."""
    blocks = parse_blocks(blocks)
    tf = term_frequency_matrix(corpus, model.table)
    pieces = []
    for block in blocks:
        base = tf.copy()
        if block is Block.BTF:
            base.data[:] = 1.0
        scaled = base @ sp.diags(model.block_weights(block, pcf_on_2b))
        scaled = sp.csr_matrix(scaled)
        scaled.eliminate_zeros()
        pieces.append(normalize_rows(scaled))
    X = sp.hstack(pieces, format="csr")
    X.sort_indices()
    return FeatureMatrix(X, _layout(blocks, model.n_terms))
