"""Small corpus builders shared by the test modules."""
import numpy as np

from troenpy.corpus import Document, LabeledCorpus
from troenpy.logreg import LogRegHyper, LogRegModel, loss_and_gradient


def corpus_of(pairs, names=None):
    """Corpus from ``(label, tokens)`` pairs; ids are ``d0, d1, ...``."""
    names = names or sorted({lab for lab, _ in pairs})
    idx = {n: i for i, n in enumerate(names)}
    return LabeledCorpus(
        [Document(f"d{i}", lab, idx[lab], toks) for i, (lab, toks) in enumerate(pairs)], names
    )


def random_corpus(rng, n_docs=20, n_terms=10, K=3):
    vocab = [f"t{j}" for j in range(n_terms)]
    names = [f"k{i}" for i in range(K)]
    pairs = []
    for _ in range(n_docs):
        lab = names[rng.randrange(K)]
        pairs.append((lab, [rng.choice(vocab) for _ in range(rng.randrange(0, 6))]))
    return corpus_of(pairs, names)


def finite_difference(model, X, y, h=1e-5):
    W0 = model.weights.copy()
    G = np.zeros_like(W0)
    for idx in np.ndindex(W0.shape):
        for sign in (1, -1):
            W = W0.copy()
            W[idx] += sign * h
            f, _ = loss_and_gradient(LogRegModel(W, hyper=model.hyper), X, y)
            G[idx] += sign * f
    return G / (2 * h)


def random_instance(rng):
    n, d, K = int(rng.integers(3, 12)), int(rng.integers(1, 6)), int(rng.integers(2, 5))
    n = max(n, K)
    X = rng.normal(size=(n, d))
    # every class present, so the unpenalized bias has a finite optimum
    y = rng.permutation(np.arange(n) % K)
    W = rng.normal(scale=0.5, size=(K, d + 1))
    lam = float(rng.choice([0.0, 1e-3, 0.1]))
    return X, y, LogRegModel(W, hyper=LogRegHyper(l2_lambda=lam))
