import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from troenpy.corpus import Document, TermClassTable, build_table
from troenpy.errors import ConfigError, DomainError, VocabularyError
from troenpy.weighting import (
    Block,
    SparseVector,
    WeightingModel,
    cib_ncf,
    cib_pcf,
    class_distribution,
    idf,
    l2_normalize,
    ncf_weight,
    parse_blocks,
    pcf_weight,
    pi_weight,
    vectorize,
    vectorize_corpus,
)

from helpers import corpus_of, random_corpus
from oracles import brute_weights

# mpmath reference values (30 digits), see tests/oracles.py for the formulas
PCF_4_OF_10 = 0.830372636595759629
NCF_4_OF_10 = -0.242585971693640621
PI_4_OF_10 = 1.40594308846623848
CIB_NCF_6_4 = -0.196165850602345247
CIB_NCF_ABSENT_6_4 = 0.0810930216216328764
CIB_PCF_6_4 = 0.125721731884474828
CIB_PCF_EVERY_6_4 = 0.0810930216216328764


def table_from(class_counts, term_rows):
    """Hand-built table: term_rows maps term -> per-class presence counts."""
    vocab = tuple(sorted(term_rows))
    cdf = np.array([term_rows[w] for w in vocab], dtype=np.int64).reshape(len(vocab), len(class_counts))
    return TermClassTable(
        vocab=vocab,
        n=int(sum(class_counts)),
        class_counts=np.array(class_counts, dtype=np.int64),
        doc_freq=cdf.sum(axis=1),
        class_doc_freq=cdf,
    )


BALANCED = table_from(
    [5, 5],
    {"all": [5, 5], "pair": [1, 1], "four0": [4, 0], "none": [0, 0]},
)
SKEWED = table_from([6, 4], {"three0": [3, 0], "absent": [0, 0], "every": [6, 4], "flat": [1, 1]})


# -- idf -------------------------------------------------------------------


@pytest.mark.parametrize(
    "n, nw, expected",
    [(100, 9, 1 + math.log(10)), (10, 9, 1.0), (4, 0, 1 + math.log(4))],
)
def test_idf_examples(n, nw, expected):
    t = table_from([n - 1, 1], {"w": [nw, 0]})
    assert idf(t, "w") == pytest.approx(expected, abs=1e-12)


def test_idf_monotone_and_lookup_error():
    n = 50
    vals = [idf(table_from([25, 25], {"w": [k, 0]}), "w") for k in range(0, 26)]
    assert np.all(np.diff(vals) < 0)
    assert min(vals) >= 1 + math.log(n / (1 + n))
    with pytest.raises(VocabularyError):
        idf(BALANCED, "zzz")


# -- class distribution ----------------------------------------------------


@pytest.mark.parametrize(
    "counts, expected",
    [([5, 5], [0.5, 0.5]), ([4, 0], [5 / 6, 1 / 6]), ([0, 0], [0.5, 0.5])],
)
def test_class_distribution_add_one(counts, expected):
    np.testing.assert_allclose(class_distribution(counts).probs, expected, atol=1e-15)


def test_class_distribution_with_prior():
    d = class_distribution([6, 4], prior=[0.6, 0.4])
    np.testing.assert_allclose(d.probs, [0.6, 0.4], atol=1e-15)
    with pytest.raises(DomainError):
        class_distribution([])
    with pytest.raises(DomainError):
        class_distribution([-1, 2])


# -- pcf / ncf / pi --------------------------------------------------------


def test_pcf_examples():
    assert pcf_weight(BALANCED, "all") == pytest.approx(0.0, abs=1e-12)
    assert pcf_weight(BALANCED, "pair") == pytest.approx(0.0, abs=1e-12)
    assert pcf_weight(BALANCED, "four0") == pytest.approx(PCF_4_OF_10, abs=1e-12)


def test_ncf_examples():
    assert ncf_weight(BALANCED, "all") == pytest.approx(0.0, abs=1e-12)
    assert ncf_weight(BALANCED, "pair") == pytest.approx(0.0, abs=1e-12)
    assert ncf_weight(BALANCED, "four0") == pytest.approx(NCF_4_OF_10, abs=1e-12)


def test_pi_examples():
    assert abs(pi_weight(BALANCED, "all")) < 1e-12
    assert idf(BALANCED, "four0") == pytest.approx(1 + math.log(2), abs=1e-12)
    assert pi_weight(BALANCED, "four0") == pytest.approx(PI_4_OF_10, abs=1e-12)


def test_pcf_can_be_negative_and_clamps():
    # uniform presence under a skewed prior lowers certainty
    t = table_from([8, 2], {"flat": [2, 2]})
    assert pcf_weight(t, "flat") < 0
    assert pcf_weight(t, "flat", clamp=True) == 0.0
    assert pi_weight(t, "flat", clamp=True) == 0.0
    m = WeightingModel.fit(t, clamp_pcf_nonneg=True)
    assert m.pcf[0] == 0.0 and m.pi[0] == 0.0


def test_pcf_zero_for_proportional_counts_under_skewed_prior():
    t = table_from([60, 40], {"half": [30, 20], "tenth": [6, 4], "all": [60, 40]})
    for w in t.vocab:
        assert abs(pcf_weight(t, w)) < 1e-12


# -- class information bias -------------------------------------------------


def test_cib_examples():
    assert cib_ncf(BALANCED, "four0") == 0.0
    assert cib_pcf(BALANCED, "four0") == 0.0
    assert cib_ncf(SKEWED, "three0") == pytest.approx(CIB_NCF_6_4, abs=1e-12)
    assert cib_pcf(SKEWED, "three0") == pytest.approx(CIB_PCF_6_4, abs=1e-12)
    assert cib_ncf(SKEWED, "absent") == pytest.approx(CIB_NCF_ABSENT_6_4, abs=1e-12)
    # every document: first denominator collapses to 1
    assert cib_pcf(SKEWED, "every") == pytest.approx(CIB_PCF_EVERY_6_4, abs=1e-12)


def test_cib_single_class_is_domain_error():
    t = table_from([5, 0], {"w": [2, 0]})
    with pytest.raises(DomainError):
        cib_ncf(t, "w")
    with pytest.raises(DomainError):
        WeightingModel.fit(t)


@given(st.integers(1, 40), st.data())
def test_balanced_binary_antisymmetry(half, data):
    nw = data.draw(st.integers(0, 2 * half))
    n0 = data.draw(st.integers(max(0, nw - half), min(half, nw)))
    t = table_from([half, half], {"w": [n0, nw - n0]})
    assert cib_ncf(t, "w") == 0.0
    assert cib_pcf(t, "w") == 0.0
    m = WeightingModel.fit(t)
    assert m.cib_ncf[0] == 0.0 and m.cib_pcf[0] == 0.0


# -- fitted model ----------------------------------------------------------


def test_model_matches_scalar_functions_and_oracle():
    rng = random.Random(11)
    for _ in range(25):
        c = random_corpus(rng, n_docs=rng.randrange(4, 21), K=rng.randrange(2, 5))
        if np.count_nonzero(c.class_counts) < 2:
            continue
        t = build_table(c)
        m = WeightingModel.fit(t)
        docs = [(d.label_index, set(d.tokens)) for d in c]
        for j, w in enumerate(t.vocab):
            ref = brute_weights(docs, c.n_classes, w)
            assert m.pi[j] == m.pcf[j] * m.idf[j]
            for name in ("idf", "pcf", "ncf", "pi", "cib_ncf", "cib_pcf"):
                assert getattr(m, name)[j] == pytest.approx(ref[name], abs=1e-10)
            assert pcf_weight(t, w) == pytest.approx(m.pcf[j], abs=1e-12)
            assert cib_pcf(t, w) == pytest.approx(m.cib_pcf[j], abs=1e-12)


def test_weight_dump(tmp_path):
    m = WeightingModel.fit(SKEWED)
    path = tmp_path / "w.tsv"
    m.dump_tsv(path)
    lines = path.read_text().splitlines()
    assert lines[0].split("\t") == ["term", "n_w", "idf", "pcf", "pi", "cib_ncf", "cib_pcf"]
    assert [l.split("\t")[0] for l in lines[1:]] == sorted(SKEWED.vocab)
    row = dict(zip(lines[0].split("\t"), lines[1 + SKEWED.term_index("three0")].split("\t")))
    assert int(row["n_w"]) == 3
    assert float(row["cib_ncf"]) == m.cib_ncf[SKEWED.term_index("three0")]


# -- vectors ---------------------------------------------------------------


def test_parse_blocks():
    assert parse_blocks("tfpi,btf,ecib") == (Block.TFPI, Block.BTF, Block.ECIB_NCF, Block.ECIB_PCF)
    with pytest.raises(ConfigError):
        parse_blocks("tfpi,bm25")
    with pytest.raises(ConfigError):
        parse_blocks("tfpi,tfpi")


@pytest.mark.parametrize(
    "vec, expected",
    [([3.0, 4.0], [0.6, 0.8]), ([0.0, 0.0], [0.0, 0.0]), ([-1.0, 0.0, 0.0], [-1.0, 0.0, 0.0])],
)
def test_l2_normalize(vec, expected):
    out = l2_normalize(SparseVector.from_dense(vec))
    np.testing.assert_allclose(out.to_dense(), expected, atol=1e-15)


def test_sparse_vector_drops_zeros():
    v = SparseVector([2, 0, 1], [1.0, 0.0, 2.0], 4)
    assert v.indices.tolist() == [1, 2] and v.values.tolist() == [2.0, 1.0]
    with pytest.raises(ValueError):
        SparseVector([5], [1.0], 4)


def _two_class_corpus():
    return corpus_of(
        [("a", ["x", "x", "y"]), ("a", ["x"]), ("a", ["x", "z"]), ("b", ["y", "z"]), ("b", ["y"]), ("b", ["z", "z", "q"])]
    )


def test_vectorize_examples():
    c = _two_class_corpus()
    m = WeightingModel.fit(build_table(c))
    dim = m.n_terms

    empty = vectorize(Document("e", "a", 0, ["unseen"]), m, "tfpi")
    assert empty.dim == dim and empty.indices.size == 0

    single = vectorize(Document("s", "a", 0, ["x", "x"]), m, "tfpi")
    j = m.table.term_index("x")
    assert single.indices.tolist() == [j]
    assert single.values[0] == pytest.approx(np.sign(m.pi[j]), abs=1e-15)


def test_tfidf_block_of_three_four():
    # idf(a) == idf(b) == 1 when n_w + 1 == n
    c = corpus_of([("k0", ["a", "b"]), ("k1", ["a", "b"]), ("k1", ["c"])])
    m = WeightingModel.fit(build_table(c))
    assert m.weight("idf", "a") == 1.0 and m.weight("idf", "b") == 1.0
    v = vectorize(Document("t", "k0", 0, ["a"] * 3 + ["b"] * 4), m, "tfidf")
    np.testing.assert_allclose(v.values, [0.6, 0.8], atol=1e-15)


def test_vectorize_corpus_matches_single_document_path():
    rng = random.Random(5)
    for _ in range(20):
        c = random_corpus(rng, n_docs=15, K=3)
        if np.count_nonzero(c.class_counts) < 2:
            continue
        m = WeightingModel.fit(build_table(c))
        blocks = "tfidf,tfpi,btf,ecib_ncf,ecib_pcf"
        for pcf_on_2b in (False, True):
            fm = vectorize_corpus(c, m, blocks, pcf_on_2b)
            assert fm.dim == 5 * m.n_terms
            for i, doc in enumerate(c):
                single = vectorize(doc, m, blocks, pcf_on_2b).to_dense()
                np.testing.assert_allclose(fm.row(i).to_dense(), single, atol=1e-12)
                for b, start, stop in fm.layout:
                    norm = np.linalg.norm(single[start:stop])
                    assert norm == pytest.approx(1.0, abs=1e-12) or norm == 0.0
                assert np.linalg.norm(single) <= math.sqrt(5) + 1e-12


def test_pcf_on_2b_scales_btf_by_pcf():
    c = _two_class_corpus()
    m = WeightingModel.fit(build_table(c))
    plain = vectorize_corpus(c, m, "btf").matrix.toarray()
    scaled = vectorize_corpus(c, m, "btf", pcf_on_2b=True).matrix.toarray()
    for i in range(len(c)):
        raw = np.where(plain[i] != 0, m.pcf, 0.0)
        nrm = np.linalg.norm(raw)
        np.testing.assert_allclose(scaled[i], raw / nrm if nrm else raw, atol=1e-12)
