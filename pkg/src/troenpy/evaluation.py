"""
Experiment orchestration.

A run loads a labelled corpus, draws ``repeats`` seeded train/test splits (or
uses a shipped split once), fits term weights on the training side only,
vectorizes both sides, classifies with kNN or logistic regression and
records the test error rate. Reports are plain JSON.
"""
from __future__ import annotations

import csv
import json
import math
import os
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import knn as knn_mod
from . import logreg
from .corpus import (
    LabeledCorpus,
    TokenizerConfig,
    build_table,
    load_corpus,
    load_predefined_split,
    load_stopwords,
    split,
)
from .errors import ConfigError, ShapeError, UndefinedReductionError
from .weighting import Block, FeatureMatrix, WeightingModel, parse_blocks, vectorize_corpus

CLASSIFIERS = ("knn", "logreg")


def error_rate(pred, truth) -> float:
    pred = np.asarray(pred)
    truth = np.asarray(truth)
    if pred.shape != truth.shape or pred.ndim != 1:
        raise ShapeError(f"prediction shape {pred.shape} does not match truth shape {truth.shape}")
    if pred.size == 0:
        raise ShapeError("error rate of an empty prediction")
    return float(np.mean(pred != truth))


def relative_reduction(baseline_err: float, new_err: float) -> float:
    """Fraction of the baseline error removed: ``(baseline - new) / baseline``."""
    if baseline_err <= 0:
        raise UndefinedReductionError(f"baseline error must be positive, got {baseline_err}")
    return (baseline_err - new_err) / baseline_err


# --------------------------------------------------------------------------
# configuration
# --------------------------------------------------------------------------


@dataclass
class ExperimentConfig:
    dataset: str | None = None
    format: str | None = None
    test_dataset: str | None = None
    classifier: str = "knn"
    features: tuple = ("tfpi",)
    pcf_on_2b: bool = False
    clamp_pcf_nonneg: bool = False
    summed_btf_distance: bool = False
    # classifier-specific; None means "use the default"
    k: int | None = None
    l2_lambda: float | None = None
    tol: float | None = None
    max_iters: int | None = None
    test_fraction: float = 0.2
    repeats: int = 50
    base_seed: int = 0
    stopwords: str | None = None
    use_stopwords: bool = True
    min_df: int = 1
    min_token_length: int = 2
    threads: int = 1

    def __post_init__(self):
        if isinstance(self.features, str):
            self.features = tuple(self.features.split(","))
        self.features = tuple(b.value for b in parse_blocks(self.features))
        self.validate()

    def validate(self):
        if self.classifier not in CLASSIFIERS:
            raise ConfigError(f"classifier must be one of {CLASSIFIERS}, got {self.classifier!r}")
        if self.classifier == "knn":
            if any(v is not None for v in (self.l2_lambda, self.tol, self.max_iters)):
                raise ConfigError("logistic-regression settings given for a knn run")
            if self.k is not None and self.k < 1:
                raise ConfigError("k must be >= 1")
        else:
            if self.k is not None:
                raise ConfigError("k given for a logreg run")
            if self.summed_btf_distance:
                raise ConfigError("summed_btf_distance only applies to knn")
            if self.l2_lambda is not None and self.l2_lambda < 0:
                raise ConfigError("l2_lambda must be >= 0")
        if not 0.0 < self.test_fraction < 1.0:
            raise ConfigError("test_fraction must lie in (0, 1)")
        if self.repeats < 1 or self.threads < 1 or self.min_df < 1 or self.min_token_length < 1:
            raise ConfigError("repeats, threads, min_df and min_token_length must be >= 1")

    @property
    def blocks(self) -> tuple[Block, ...]:
        return parse_blocks(self.features)

    @property
    def effective_k(self) -> int:
        return knn_mod.DEFAULT_K if self.k is None else self.k

    def logreg_hyper(self) -> logreg.LogRegHyper:
        defaults = logreg.LogRegHyper()
        return logreg.LogRegHyper(
            l2_lambda=defaults.l2_lambda if self.l2_lambda is None else self.l2_lambda,
            tol=defaults.tol if self.tol is None else self.tol,
            max_iters=defaults.max_iters if self.max_iters is None else self.max_iters,
            seed=self.base_seed,
        )

    def tokenizer(self) -> TokenizerConfig:
        stop = load_stopwords(self.stopwords) if self.use_stopwords else frozenset()
        return TokenizerConfig(stopwords=stop, min_length=self.min_token_length)

    def to_dict(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["features"] = list(self.features)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**d)


# --------------------------------------------------------------------------
# report
# --------------------------------------------------------------------------


@dataclass
class EvalReport:
    config: dict
    repeats: list
    mean_error: float
    std_error: float
    baseline_comparison: dict | None = None
    timings: dict = field(default_factory=dict)

    @property
    def errors(self) -> list[float]:
        return [r["error"] for r in self.repeats]

    def to_dict(self, include_timings: bool = True) -> dict:
        d = {
            "config": self.config,
            "repeats": self.repeats,
            "mean_error": self.mean_error,
            "std_error": self.std_error,
            "baseline_comparison": self.baseline_comparison,
        }
        if include_timings:
            d["timings"] = self.timings
        return d

    def to_json(self, include_timings: bool = True) -> str:
        return json.dumps(self.to_dict(include_timings), indent=2, sort_keys=True)

    def save(self, path: str | os.PathLike) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    def write_csv(self, path: str | os.PathLike) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["repeat", "seed", "n_train", "n_test", "error"])
            for r in self.repeats:
                w.writerow([r["repeat"], r["seed"], r["n_train"], r["n_test"], repr(r["error"])])

    @classmethod
    def from_dict(cls, d: dict) -> "EvalReport":
        return cls(
            config=d["config"],
            repeats=d["repeats"],
            mean_error=d["mean_error"],
            std_error=d["std_error"],
            baseline_comparison=d.get("baseline_comparison"),
            timings=d.get("timings", {}),
        )

    @classmethod
    def load(cls, path: str | os.PathLike) -> "EvalReport":
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def compare_to_baseline(report: EvalReport, baseline: EvalReport) -> dict:
    try:
        reduction = relative_reduction(baseline.mean_error, report.mean_error)
    except UndefinedReductionError:
        reduction = None
    return {
        "baseline_features": baseline.config.get("features"),
        "baseline_classifier": baseline.config.get("classifier"),
        "baseline_mean_error": baseline.mean_error,
        "relative_reduction": reduction,
    }


# --------------------------------------------------------------------------
# running
# --------------------------------------------------------------------------


def load_data(config: ExperimentConfig):
    """Return ``(corpus, None)`` for random splitting or ``(train, test)`` for a shipped split."""
    if config.dataset is None:
        raise ConfigError("no dataset configured")
    tok = config.tokenizer()
    if config.test_dataset:
        return load_predefined_split(config.dataset, config.test_dataset, config.format, tok)
    return load_corpus(config.dataset, config.format, tok), None


def fit_weights(train: LabeledCorpus, config: ExperimentConfig) -> WeightingModel:
    """Weights depend on the training documents only."""
    return WeightingModel.fit(build_table(train, config.min_df), config.clamp_pcf_nonneg)


def classify(train: LabeledCorpus, test: LabeledCorpus, config: ExperimentConfig) -> np.ndarray:
    model = fit_weights(train, config)
    Xtr = vectorize_corpus(train, model, config.blocks, config.pcf_on_2b)
    Xte = vectorize_corpus(test, model, config.blocks, config.pcf_on_2b)
    if config.classifier == "knn":
        extra = None
        if config.summed_btf_distance:
            extra = (
                vectorize_corpus(test, model, (Block.BTF,), config.pcf_on_2b),
                vectorize_corpus(train, model, (Block.BTF,), config.pcf_on_2b),
            )
        return knn_mod.knn_classify(Xte, Xtr, train.labels, config.effective_k, extra=extra)
    clf = logreg.fit(Xtr, train.labels, config.logreg_hyper(), class_names=train.class_names)
    return logreg.predict(clf, Xte)


def _one_repeat(train, test, config, r, seed):
    t0 = time.perf_counter()
    pred = classify(train, test, config)
    return {
        "repeat": r,
        "seed": seed,
        "n_train": len(train),
        "n_test": len(test),
        "error": error_rate(pred, test.labels),
    }, time.perf_counter() - t0


def run_experiment(
    config: ExperimentConfig,
    data: LabeledCorpus | tuple | None = None,
    baseline: EvalReport | None = None,
) -> EvalReport:
    """Run every repeat of `config` and aggregate the error rates.

    `data` overrides the configured dataset: a corpus is split randomly, a
    ``(train, test)`` pair is evaluated once.
    """
    config.validate()
    t_start = time.perf_counter()
    if data is None:
        corpus, test = load_data(config)
    elif isinstance(data, tuple):
        corpus, test = data
    else:
        corpus, test = data, None
    t_load = time.perf_counter() - t_start

    if test is not None:
        jobs = [(corpus, test, 0, None)]
    else:
        jobs = []
        for r in range(config.repeats):
            seed = config.base_seed + r
            tr, te = split(corpus, config.test_fraction, seed)
            jobs.append((tr, te, r, seed))

    def work(job):
        tr, te, r, seed = job
        return _one_repeat(tr, te, config, r, seed)

    if config.threads > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            results = list(pool.map(work, jobs))
    else:
        results = [work(j) for j in jobs]

    repeats = [res for res, _ in results]
    errs = [r["error"] for r in repeats]
    report = EvalReport(
        config=config.to_dict(),
        repeats=repeats,
        mean_error=math.fsum(errs) / len(errs),
        std_error=statistics.pstdev(errs),
        timings={
            "load_seconds": t_load,
            "repeat_seconds": [t for _, t in results],
            "total_seconds": time.perf_counter() - t_start,
        },
    )
    if baseline is not None:
        report.baseline_comparison = compare_to_baseline(report, baseline)
    return report


# --------------------------------------------------------------------------
# vector export
# --------------------------------------------------------------------------


def write_vectors(path, documents, features: FeatureMatrix | None, vocab) -> int:
    """TSV with ``id``, ``label`` and one column per feature; returns the row count."""
    try:
        fh = open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise OSError(f"cannot write vectors to {path}: {exc}") from exc
    with fh:
        header = ["id", "label"] + (features.column_names(vocab) if features is not None else [])
        fh.write("\t".join(header) + "\n")
        if features is None:
            return 0
        for doc, row in zip(documents, features.rows()):
            dense = row.to_dense()
            fh.write("\t".join([doc.id, doc.label] + [repr(float(x)) for x in dense]) + "\n")
    return len(documents)


def read_vectors(path) -> tuple[list[str], list[str], np.ndarray, list[str]]:
    """Inverse of :func:`write_vectors`: ``(ids, labels, matrix, column_names)``."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split("\t")
        ids, labels, rows = [], [], []
        for line in fh:
            parts = line.rstrip("\n").split("\t")
            ids.append(parts[0])
            labels.append(parts[1])
            rows.append([float(x) for x in parts[2:]])
    mat = np.array(rows, dtype=np.float64).reshape(len(rows), len(header) - 2)
    return ids, labels, mat, header[2:]


def export_vectors(config: ExperimentConfig, out_path, which: str = "all", data=None) -> int:
    """Write block-concatenated document vectors for external visualization.

    Weights come from the training side of the first repeat (or the shipped
    training split). `which` selects ``"all"``, ``"train"`` or ``"test"`` rows.
    """
    if which not in ("all", "train", "test"):
        raise ConfigError(f"unknown split selector {which!r}")
    if data is None:
        corpus, test = load_data(config)
    elif isinstance(data, tuple):
        corpus, test = data
    else:
        corpus, test = data, None

    if len(corpus) == 0 and (test is None or len(test) == 0):
        return write_vectors(out_path, [], None, ())

    if test is None:
        train, test = split(corpus, config.test_fraction, config.base_seed)
        everything = corpus
    else:
        train = corpus
        everything = LabeledCorpus(train.documents + test.documents, train.class_names)

    model = fit_weights(train, config)
    docs = {"all": everything, "train": train, "test": test}[which]
    features = vectorize_corpus(docs, model, config.blocks, config.pcf_on_2b)
    return write_vectors(out_path, docs.documents, features, model.vocab)
