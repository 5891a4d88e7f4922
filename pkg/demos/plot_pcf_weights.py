"""
Class-aware term weights on a toy corpus
========================================

IDF only knows how many documents contain a term. The PCF weight also looks
at which classes those documents belong to: a term concentrated in one class
gains certainty about the label and is weighted up, while a term spread like
the labels themselves gets nothing.
"""

from troenpy import TokenizerConfig, WeightingModel, build_table
from troenpy.corpus import LabeledCorpus

rows = [
    ("sport", "the match ended with a late goal"),
    ("sport", "a goal in extra time won the match"),
    ("sport", "the coach praised the match result"),
    ("politics", "the vote ended the long debate"),
    ("politics", "the minister lost the vote"),
    ("politics", "a debate on the result of the vote"),
]

# Keep every token so that "the" shows up as a ubiquitous term.
records = [(f"d{i}", label, text) for i, (label, text) in enumerate(rows)]
corpus = LabeledCorpus.from_records(records, TokenizerConfig(stopwords=frozenset()))
table = build_table(corpus)
model = WeightingModel.fit(table)

print(f"{'term':10} {'n_w':>3} {'idf':>7} {'pcf':>7} {'pi':>7} {'ncf':>7}")
for j, term in enumerate(table.vocab):
    print(
        f"{term:10} {table.doc_freq[j]:3d} {model.idf[j]:7.3f} {model.pcf[j]:7.3f}"
        f" {model.pi[j]:7.3f} {model.ncf[j]:7.3f}"
    )

# "the" is everywhere and "result" is split evenly, so both have pcf 0;
# "match" and "vote" live in a single class and get the largest weights.
# With two classes of equal size the class-bias features cancel out exactly,
# so they are not shown here; they matter for unbalanced label sets.
