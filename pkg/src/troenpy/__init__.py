"""Troenpy-based term weighting and class-bias features for text classification."""

__version__ = "0.1.0"

from .corpus import (
    Document,
    LabeledCorpus,
    TermClassTable,
    TokenizerConfig,
    build_table,
    load_corpus,
    load_predefined_split,
    load_stopwords,
    split,
    tokenize,
)
from .info import Distribution, entropy, negative_information, positive_information, troenpy
from .weighting import (
    Block,
    FeatureMatrix,
    SparseVector,
    WeightingModel,
    class_distribution,
    cib_ncf,
    cib_pcf,
    idf,
    l2_normalize,
    ncf_weight,
    pcf_weight,
    pi_weight,
    vectorize,
    vectorize_corpus,
)
