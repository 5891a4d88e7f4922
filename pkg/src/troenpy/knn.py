"""
Deterministic k-nearest-neighbour classification.

Distances are Euclidean. For L2-normalized rows this ranks neighbours exactly
as cosine distance would.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp

from .errors import ShapeError

DEFAULT_K = 7


def _as_matrix(X):
    m = getattr(X, "matrix", X)
    if sp.issparse(m):
        return sp.csr_matrix(m, dtype=np.float64)
    return np.atleast_2d(np.asarray(m, dtype=np.float64))


def _row_sq_norms(M) -> np.ndarray:
    if sp.issparse(M):
        return np.asarray(M.multiply(M).sum(axis=1)).ravel()
    return np.einsum("ij,ij->i", M, M)


def pairwise_distance(test, train) -> np.ndarray:
    """Euclidean distances, shape ``(len(test), len(train))``.

    Accepts FeatureMatrix objects, scipy sparse matrices or dense arrays.
    Passing the same object twice yields an exactly symmetric matrix with a
    zero diagonal.
    """
    A = _as_matrix(test)
    B = A if train is test else _as_matrix(train)
    if A.shape[1] != B.shape[1]:
        raise ShapeError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]}")
    gram = A @ B.T
    gram = gram.toarray() if sp.issparse(gram) else np.asarray(gram)
    sq = _row_sq_norms(A)[:, None] + _row_sq_norms(B)[None, :] - 2.0 * gram
    D = np.sqrt(np.maximum(sq, 0.0))
    if train is test:
        D = np.triu(D, 1)
        D = D + D.T
    return D


def combined_distance(d1, d2) -> np.ndarray:
    """Entrywise sum of two distance matrices of equal shape."""
    d1 = np.asarray(d1, dtype=np.float64)
    d2 = np.asarray(d2, dtype=np.float64)
    if d1.shape != d2.shape:
        raise ShapeError(f"shape mismatch: {d1.shape} vs {d2.shape}")
    return d1 + d2


def knn_predict(dist, train_labels, k: int = DEFAULT_K) -> np.ndarray:
    """Majority vote among the `k` nearest training documents of every test row.

    Neighbours tied on distance are taken in training-index order. A vote tie
    goes to the tied class with the smallest mean neighbour distance, then to
    the lowest class index.
    """
    D = np.atleast_2d(np.asarray(dist, dtype=np.float64))
    y = np.asarray(train_labels, dtype=np.int64)
    if D.shape[1] != y.size:
        raise ShapeError(f"{D.shape[1]} distance columns but {y.size} training labels")
    if not 1 <= k <= y.size:
        raise ValueError(f"k must lie in [1, {y.size}], got {k}")
    if D.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)

    K = int(y.max()) + 1
    nbr = np.argsort(D, axis=1, kind="stable")[:, :k]
    nd = np.take_along_axis(D, nbr, axis=1)
    nl = y[nbr]

    rows = np.repeat(np.arange(D.shape[0]), k)
    votes = np.zeros((D.shape[0], K), dtype=np.int64)
    np.add.at(votes, (rows, nl.ravel()), 1)
    dsum = np.zeros((D.shape[0], K))
    np.add.at(dsum, (rows, nl.ravel()), nd.ravel())

    top = votes.max(axis=1, keepdims=True)
    tied = votes == top
    with np.errstate(invalid="ignore", divide="ignore"):
        mean = np.where(tied, dsum / votes, np.inf)
    # argmin picks the lowest class index among equal means
    return np.argmin(mean, axis=1).astype(np.int64)


def knn_classify(test, train, train_labels, k: int = DEFAULT_K, extra=None, chunk_size: int = 2048):
    """Distance computation plus voting, in row chunks to bound memory.

    `extra` is an optional ``(test_extra, train_extra)`` pair whose Euclidean
    distances are added to the main ones before voting.
    """
    A = _as_matrix(test)
    B = _as_matrix(train)
    if extra is not None:
        EA, EB = _as_matrix(extra[0]), _as_matrix(extra[1])
    out = []
    for start in range(0, A.shape[0], chunk_size):
        stop = min(start + chunk_size, A.shape[0])
        D = pairwise_distance(A[start:stop], B)
        if extra is not None:
            D = combined_distance(D, pairwise_distance(EA[start:stop], EB))
        out.append(knn_predict(D, train_labels, k))
    return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)
