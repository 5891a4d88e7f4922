"""
Command-line entry point: ``troenpy {stats,eval,export}``.

Settings come from an optional ``--config`` file (JSON, or TOML on Python
3.11+) whose keys are :class:`~troenpy.evaluation.ExperimentConfig` field
names; flags given on the command line override the file.

Exit codes: 0 success, 1 runtime failure, 2 usage, configuration or
ingestion error.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .corpus import build_table
from .errors import ConfigError, DomainError, IngestionError, TroenpyError
from .evaluation import EvalReport, ExperimentConfig, export_vectors, load_data, run_experiment
from .weighting import WeightingModel

log = logging.getLogger("troenpy")

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2

# flag dest -> ExperimentConfig field
_FLAG_TO_FIELD = {
    "dataset": "dataset",
    "format": "format",
    "test_dataset": "test_dataset",
    "stopwords": "stopwords",
    "no_stopwords": "use_stopwords",
    "min_df": "min_df",
    "classifier": "classifier",
    "features": "features",
    "k": "k",
    "l2_lambda": "l2_lambda",
    "max_iters": "max_iters",
    "repeats": "repeats",
    "seed": "base_seed",
    "test_fraction": "test_fraction",
    "pcf_on_2b": "pcf_on_2b",
    "clamp_pcf": "clamp_pcf_nonneg",
    "sum_btf_distance": "summed_btf_distance",
    "threads": "threads",
}


def _corpus_flags(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--config", default=None, help="JSON (or TOML) experiment config file")
    p.add_argument("--dataset", default=S, help="corpus path (file or class directory)")
    p.add_argument("--format", choices=["jsonl", "tsv", "class-dirs"], default=S)
    p.add_argument("--test-dataset", default=S, help="shipped test split; disables random splitting")
    p.add_argument("--stopwords", default=S, help="stop-word file (fallback: $TROENPY_STOPWORDS, then bundled list)")
    p.add_argument("--no-stopwords", action="store_false", default=S, help="keep stop words")
    p.add_argument("--min-df", type=int, default=S)


def _experiment_flags(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--classifier", choices=["knn", "logreg"], default=S)
    p.add_argument("--features", default=S, help="comma list of tfidf,tfpi,btf,ecib_ncf,ecib_pcf (ecib = both)")
    p.add_argument("--k", type=int, default=S)
    p.add_argument("--l2-lambda", type=float, default=S)
    p.add_argument("--max-iters", type=int, default=S)
    p.add_argument("--repeats", type=int, default=S)
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--test-fraction", type=float, default=S)
    p.add_argument("--pcf-on-2b", action="store_true", default=S, help="scale BTF/ECIB blocks by the PCF weight")
    p.add_argument("--clamp-pcf", action="store_true", default=S, help="clamp negative PCF weights to zero")
    p.add_argument("--sum-btf-distance", action="store_true", default=S, help="kNN: add BTF distances")
    p.add_argument("--threads", type=int, default=S)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="troenpy", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="corpus summary and optional weight dump")
    _corpus_flags(p)
    p.add_argument("--dump-weights", metavar="PATH", help="write the weight TSV ('-' for stdout)")

    p = sub.add_parser("eval", help="run an experiment and write a JSON report")
    _corpus_flags(p)
    _experiment_flags(p)
    p.add_argument("--baseline", metavar="REPORT", help="earlier report to compute error reduction against")
    p.add_argument("--out", default="report.json", help="report path (default: report.json)")
    p.add_argument("--csv", metavar="PATH", help="also write per-repeat errors as CSV")

    p = sub.add_parser("export", help="write document vectors as TSV")
    _corpus_flags(p)
    _experiment_flags(p)
    p.add_argument("--split", choices=["all", "train", "test"], default="all", dest="which")
    p.add_argument("--out", required=True)
    return parser


def _read_config_file(path: str) -> dict:
    p = Path(path)
    try:
        raw = p.read_bytes()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if p.suffix.lower() == ".toml":
        try:
            import tomllib
        except ImportError:  # Python < 3.11
            raise ConfigError("TOML configs need Python 3.11+; use JSON") from None
        return tomllib.loads(raw.decode("utf-8"))
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return data


def make_config(args: argparse.Namespace) -> ExperimentConfig:
    settings = _read_config_file(args.config) if args.config else {}
    for flag, fieldname in _FLAG_TO_FIELD.items():
        if hasattr(args, flag):
            settings[fieldname] = getattr(args, flag)
    if "stopwords" not in settings and os.environ.get("TROENPY_STOPWORDS"):
        settings["stopwords"] = os.environ["TROENPY_STOPWORDS"]
    if not settings.get("dataset"):
        raise ConfigError("--dataset is required (flag or config file)")
    return ExperimentConfig.from_dict(settings)


def cmd_stats(args) -> int:
    config = make_config(args)
    corpus, test = load_data(config)
    if test is not None:
        log.info("stats cover the training file only")
    table = build_table(corpus, config.min_df)
    counts = ",".join(str(int(c)) for c in corpus.class_counts)
    print(f"n={len(corpus)} K={corpus.n_classes} C=[{counts}] vocab={table.n_terms}")
    if args.dump_weights:
        tsv = WeightingModel.fit(table, config.clamp_pcf_nonneg).to_tsv()
        if args.dump_weights == "-":
            sys.stdout.write(tsv)
        else:
            Path(args.dump_weights).write_text(tsv, encoding="utf-8")
    return EXIT_OK


def cmd_eval(args) -> int:
    config = make_config(args)
    baseline = EvalReport.load(args.baseline) if args.baseline else None
    report = run_experiment(config, baseline=baseline)
    report.save(args.out)
    if args.csv:
        report.write_csv(args.csv)
    line = f"mean_error={report.mean_error:.6f} std={report.std_error:.6f} repeats={len(report.repeats)}"
    if report.baseline_comparison and report.baseline_comparison["relative_reduction"] is not None:
        line += f" relative_reduction={report.baseline_comparison['relative_reduction']:.6f}"
    print(line)
    return EXIT_OK


def cmd_export(args) -> int:
    config = make_config(args)
    rows = export_vectors(config, args.out, args.which)
    log.info("wrote %d rows to %s", rows, args.out)
    return EXIT_OK


COMMANDS = {"stats": cmd_stats, "eval": cmd_eval, "export": cmd_export}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except (ConfigError, IngestionError) as exc:
        print(f"troenpy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TroenpyError, DomainError, OSError, ValueError) as exc:
        print(f"troenpy: failed: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
