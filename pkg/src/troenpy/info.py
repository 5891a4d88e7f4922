"""
Information quantities over finite discrete distributions.

Shannon self-information (here called negative information, NI) measures how
surprising an outcome is. Its dual, positive information (PI), measures how
common an outcome is: PI(p) = NI(1 - p). Taking expectations over a
distribution gives entropy and troenpy respectively:

    entropy(p) = -sum_i p_i log(p_i)
    troenpy(p) = -sum_i p_i log(1 - p_i)

All logarithms are natural (nats). Log arguments are clamped at ``EPS`` so
degenerate inputs (p = 0 for NI, p = 1 for PI) produce a large but finite
value instead of ``inf``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .errors import DomainError

EPS = 1e-12
SUM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Distribution:
    """A finite probability vector.

    Construction validates the vector; it never renormalizes silently. Use
    :meth:`from_weights` to normalize an arbitrary non-negative vector.
    """

    probs: np.ndarray

    def __post_init__(self):
        p = np.array(self.probs, dtype=np.float64).ravel()
        if p.size == 0:
            raise DomainError("distribution must be non-empty")
        if not np.all(np.isfinite(p)) or np.any(p < 0.0) or np.any(p > 1.0):
            raise DomainError(f"probabilities must lie in [0, 1], got {p!r}")
        total = math.fsum(p)
        if abs(total - 1.0) > SUM_TOL:
            raise DomainError(f"probabilities sum to {total!r}, not 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    @classmethod
    def from_weights(cls, weights) -> "Distribution":
        w = np.asarray(weights, dtype=np.float64).ravel()
        if w.size == 0 or np.any(w < 0.0) or not np.all(np.isfinite(w)):
            raise DomainError("weights must be a non-empty, finite, non-negative vector")
        total = w.sum()
        if total <= 0.0:
            raise DomainError("weights sum to zero")
        return cls(w / total)

    def __len__(self):
        return self.probs.size

    def __repr__(self):
        return f"Distribution({self.probs.tolist()!r})"


DistributionLike = Union[Distribution, "np.ndarray", list, tuple]


def _as_distribution(d: DistributionLike) -> Distribution:
    return d if isinstance(d, Distribution) else Distribution(d)


def _check_probability(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"probability must lie in [0, 1], got {p!r}")
    return p


def negative_information(p: float) -> float:
    """Shannon self-information ``-ln p`` of an outcome with probability `p`."""
    p = _check_probability(p)
    return -math.log(max(p, EPS))


def positive_information(p: float) -> float:
    """Commonness ``-ln(1 - p)`` of an outcome with probability `p`.

    Defined through the complement outcome, so ``positive_information(p)``
    and ``negative_information(1 - p)`` agree bit for bit.
    """
    p = _check_probability(p)
    return negative_information(1.0 - p)


def _neg_log(x: np.ndarray) -> np.ndarray:
    return -np.log(np.maximum(x, EPS))


def entropy(d: DistributionLike) -> float:
    p = _as_distribution(d).probs
    return float(np.dot(p, _neg_log(p)))


def troenpy(d: DistributionLike) -> float:
    """Expected positive information of a distribution.

    >>> round(troenpy([0.5, 0.5]), 6)
    0.693147
    >>> round(troenpy([0.9, 0.1]), 6)
    2.082863
    """
    p = _as_distribution(d).probs
    return float(np.dot(p, _neg_log(1.0 - p)))


def entropy_rows(P: np.ndarray) -> np.ndarray:
    """Row-wise entropy of a stack of (already valid) distributions."""
    P = np.asarray(P, dtype=np.float64)
    return np.einsum("ij,ij->i", P, _neg_log(P))


def troenpy_rows(P: np.ndarray) -> np.ndarray:
    """Row-wise troenpy of a stack of (already valid) distributions."""
    P = np.asarray(P, dtype=np.float64)
    return np.einsum("ij,ij->i", P, _neg_log(1.0 - P))
