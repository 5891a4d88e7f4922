"""
Multinomial logistic regression trained by full-batch gradient descent.

The objective is mean softmax cross-entropy plus ``(l2_lambda / 2) * ||W||^2``
on the non-bias weights. Each step starts from a Barzilai-Borwein step length
and halves it until the Armijo sufficient-decrease condition holds, so the
objective never increases between accepted iterates. Training starts at
``W = 0`` and is fully deterministic.
"""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import DivergenceError, ShapeError

FORMAT_NAME = "troenpy-logreg"
FORMAT_VERSION = 1

ARMIJO_C = 1e-4
MIN_STEP = 1e-20


@dataclass(frozen=True)
class LogRegHyper:
    l2_lambda: float = 1e-4
    tol: float = 1e-6
    max_iters: int = 2000
    seed: int = 0
    initial_step: float = 1.0

    def __post_init__(self):
        if self.l2_lambda < 0:
            raise ValueError("l2_lambda must be >= 0")
        if self.max_iters < 0 or self.initial_step <= 0:
            raise ValueError("max_iters must be >= 0 and initial_step > 0")

    def digest(self) -> str:
        blob = json.dumps(asdict(self), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


@dataclass(eq=False)
class LogRegModel:
    """Weights are ``(K, dim + 1)``; the last column is the bias."""

    weights: np.ndarray
    class_names: tuple = ()
    hyper: LogRegHyper = field(default_factory=LogRegHyper)
    n_iter: int = 0
    converged: bool = False
    loss_history: list = field(default_factory=list, repr=False)

    @property
    def n_classes(self) -> int:
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.weights.shape[1] - 1

    def decision_function(self, X) -> np.ndarray:
        X = _as_matrix(X)
        if X.shape[1] != self.dim:
            raise ShapeError(f"model expects {self.dim} features, got {X.shape[1]}")
        return _scores(self.weights, X)

    def predict_proba(self, X) -> np.ndarray:
        S = self.decision_function(X)
        S = S - S.max(axis=1, keepdims=True)
        E = np.exp(S)
        return E / E.sum(axis=1, keepdims=True)

    def predict(self, X) -> np.ndarray:
        return predict(self, X)

    # -- persistence ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "format": FORMAT_NAME,
            "version": FORMAT_VERSION,
            "class_names": list(self.class_names),
            "hyper": asdict(self.hyper),
            "config_hash": self.hyper.digest(),
            "n_iter": self.n_iter,
            "converged": self.converged,
            "weights": self.weights.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "LogRegModel":
        if d.get("format") != FORMAT_NAME or d.get("version") != FORMAT_VERSION:
            raise ValueError(f"not a {FORMAT_NAME} v{FORMAT_VERSION} model")
        hyper = LogRegHyper(**d["hyper"])
        if hyper.digest() != d.get("config_hash"):
            raise ValueError("config hash does not match the stored hyperparameters")
        return cls(
            weights=np.asarray(d["weights"], dtype=np.float64),
            class_names=tuple(d["class_names"]),
            hyper=hyper,
            n_iter=d.get("n_iter", 0),
            converged=d.get("converged", False),
        )

    def save(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "LogRegModel":
        with open(path, encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def _as_matrix(X):
    m = getattr(X, "matrix", X)
    if sp.issparse(m):
        return sp.csr_matrix(m, dtype=np.float64)
    return np.atleast_2d(np.asarray(m, dtype=np.float64))


def _scores(W: np.ndarray, X) -> np.ndarray:
    return np.asarray(X @ W[:, :-1].T) + W[:, -1]


def _objective(W: np.ndarray, X, y: np.ndarray, lam: float):
    n = X.shape[0]
    S = _scores(W, X)
    smax = S.max(axis=1, keepdims=True)
    E = np.exp(S - smax)
    Z = E.sum(axis=1, keepdims=True)
    lse = (smax + np.log(Z)).ravel()
    W_nb = W[:, :-1]
    loss = np.mean(lse - S[np.arange(n), y]) + 0.5 * lam * np.sum(W_nb * W_nb)

    R = E / Z
    R[np.arange(n), y] -= 1.0
    R /= n
    G = np.empty_like(W)
    G[:, :-1] = np.asarray((X.T @ R).T) + lam * W_nb
    G[:, -1] = R.sum(axis=0)
    return float(loss), G


def _check(X, y, n_classes):
    X = _as_matrix(X)
    y = np.asarray(y, dtype=np.int64).ravel()
    if X.shape[0] != y.size:
        raise ShapeError(f"{X.shape[0]} rows but {y.size} labels")
    if y.size and (y.min() < 0 or y.max() >= n_classes):
        raise ValueError(f"labels must lie in 0..{n_classes - 1}")
    return X, y


def loss_and_gradient(model: LogRegModel, X, y):
    """Objective value and its exact gradient at ``model.weights``."""
    X, y = _check(X, y, model.n_classes)
    if X.shape[1] != model.dim:
        raise ShapeError(f"model expects {model.dim} features, got {X.shape[1]}")
    return _objective(model.weights, X, y, model.hyper.l2_lambda)


def fit(X, y, hyper: LogRegHyper | None = None, class_names=None, n_classes: int | None = None) -> LogRegModel:
    hyper = hyper or LogRegHyper()
    y_arr = np.asarray(y, dtype=np.int64).ravel()
    if n_classes is None:
        n_classes = len(class_names) if class_names else (int(y_arr.max()) + 1 if y_arr.size else 0)
    X, y_arr = _check(X, y_arr, n_classes)
    n, dim = X.shape
    if n == 0 or n < n_classes:
        raise ValueError(f"need at least as many samples ({n}) as classes ({n_classes})")
    lam = hyper.l2_lambda

    W = np.zeros((n_classes, dim + 1))
    with np.errstate(invalid="ignore", over="ignore"):
        f, G = _objective(W, X, y_arr, lam)
    if not np.isfinite(f):
        raise DivergenceError("objective is not finite at W = 0; check inputs for NaN/inf")
    history = [f]
    step = hyper.initial_step
    converged = False
    it = 0
    while it < hyper.max_iters:
        if np.max(np.abs(G)) < hyper.tol:
            converged = True
            break
        g2 = float(np.sum(G * G))
        while True:
            W_new = W - step * G
            f_new, G_new = _objective(W_new, X, y_arr, lam)
            if np.isfinite(f_new) and f_new <= f - ARMIJO_C * step * g2:
                break
            step *= 0.5
            if step < MIN_STEP:
                break
        if step < MIN_STEP:
            # no representable decrease left along the gradient
            converged = bool(np.max(np.abs(G)) < hyper.tol)
            break
        s = W_new - W
        dg = G_new - G
        sy = float(np.sum(s * dg))
        W, f, G = W_new, f_new, G_new
        history.append(f)
        it += 1
        step = float(np.clip(np.sum(s * s) / sy, 1e-10, 1e10)) if sy > 0 else step * 2.0
    else:
        converged = bool(np.max(np.abs(G)) < hyper.tol)

    return LogRegModel(
        weights=W,
        class_names=tuple(class_names) if class_names else tuple(str(i) for i in range(n_classes)),
        hyper=hyper,
        n_iter=it,
        converged=converged,
        loss_history=history,
    )


def predict(model: LogRegModel, X) -> np.ndarray:
    """Highest-scoring class per row; ties go to the lower class index."""
    return np.argmax(model.decision_function(X), axis=1).astype(np.int64)
