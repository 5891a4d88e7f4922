"""Generated corpora with a known class structure, for tests and demos."""
from __future__ import annotations

import numpy as np

from .corpus import Document, LabeledCorpus


def indicator_records(
    n_classes: int = 4,
    docs_per_class: int = 100,
    indicators_per_class: int = 5,
    noise_terms: int = 200,
    noise_tokens: int = 30,
    indicator_tokens: int = 2,
    seed: int = 0,
) -> list[tuple[str, str, str]]:
    """``(id, label, text)`` records where each class owns a few exclusive terms.

    Every document draws `noise_tokens` tokens uniformly from a shared noise
    vocabulary and `indicator_tokens` tokens uniformly from its own class's
    indicator terms. Indicators never occur outside their class.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    noise = [f"noise{j:03d}" for j in range(noise_terms)]
    records = []
    for c in range(n_classes):
        indicators = [f"class{c}ind{j}" for j in range(indicators_per_class)]
        for d in range(docs_per_class):
            toks = [noise[j] for j in rng.integers(0, noise_terms, size=noise_tokens)]
            toks += [indicators[j] for j in rng.integers(0, indicators_per_class, size=indicator_tokens)]
            order = rng.permutation(len(toks))
            records.append((f"c{c}d{d:03d}", f"class{c}", " ".join(toks[i] for i in order)))
    return records


def indicator_corpus(**kwargs) -> LabeledCorpus:
    """:func:`indicator_records` as an already tokenized corpus."""
    records = indicator_records(**kwargs)
    names = sorted({label for _, label, _ in records})
    index = {name: i for i, name in enumerate(names)}
    return LabeledCorpus(
        [Document(i, label, index[label], text.split()) for i, label, text in records], names
    )
