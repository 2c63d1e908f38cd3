"""Command-line surface: preprocess, train-ngram, score, curve, trend, migap,
synth, and report subcommands.

Every output file starts with a comment header carrying the tool version and
the fully resolved configuration, and is a pure function of its inputs, so
reruns are byte-identical.  Exit codes: 0 success, 1 usage error, 2 data
error, 3 numeric error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import entropyrate
from entropyrate import corpus as corpus_mod
from entropyrate import curves as curves_mod
from entropyrate import report as report_mod
from entropyrate import scoring as scoring_mod
from entropyrate import synth as synth_mod
from entropyrate import trend as trend_mod
from entropyrate.trigram import InterpolatedTrigramModel

log = logging.getLogger("entropyrate")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _header(args: argparse.Namespace, command: str) -> list[str]:
    config = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    return [
        f"entropyrate {entropyrate.__version__} {command}",
        "config: " + json.dumps(config, sort_keys=True, default=str),
    ]


# --- subcommands ----------------------------------------------------------


def cmd_preprocess(args) -> int:
    docs = corpus_mod.read_corpus(args.corpus, lowercase=not args.no_lowercase)
    split = corpus_mod.split_corpus(
        docs, (args.train_size, args.val_size, args.test_size), args.seed
    )
    header = _header(args, "preprocess")
    corpus_mod.write_manifest((d.id for d in split.train), args.train, header)
    corpus_mod.write_manifest((d.id for d in split.validation), args.val, header)
    corpus_mod.write_manifest((d.id for d in split.test), args.test, header)
    vocab = corpus_mod.build_vocabulary(split.train, args.min_count)
    vocab.save(args.vocab)
    log.info(
        "split %d docs into %d/%d/%d; vocabulary size %d (min_count=%d)",
        len(docs), len(split.train), len(split.validation), len(split.test),
        len(vocab), args.min_count,
    )
    return EXIT_OK


def cmd_train_ngram(args) -> int:
    docs = corpus_mod.read_corpus(args.corpus, lowercase=not args.no_lowercase)
    train_docs = corpus_mod.select_documents(docs, corpus_mod.read_manifest(args.train))
    vocab = corpus_mod.Vocabulary.load(args.vocab)
    missing_titles = 0
    seqs = []
    for doc in train_docs:
        rendered = corpus_mod.render_document(doc, args.title_mode, not args.no_lowercase)
        missing_titles += rendered.title_missing
        seqs.append(vocab.map_words(rendered.words))
    if missing_titles:
        log.warning("%d documents had no title; rendered without one", missing_titles)
    model = InterpolatedTrigramModel.train(
        seqs, vocab, args.lambda1, args.lambda2, workers=args.workers
    )
    model.save(args.out)
    log.info("trained trigram on %d docs (%d tokens)", len(seqs), model.counts.total_tokens)
    return EXIT_OK


def cmd_score(args) -> int:
    docs = corpus_mod.read_corpus(args.corpus, lowercase=not args.no_lowercase)
    test_docs = corpus_mod.select_documents(docs, corpus_mod.read_manifest(args.test))
    log_base = 2.0 if args.log_base == "2" else __import__("math").e
    if args.model:
        vocab = corpus_mod.Vocabulary.load(args.vocab)
        model = InterpolatedTrigramModel.load(args.model, vocab)
        seqs = [
            scoring_mod.score_with_trigram(
                model, doc, args.title_mode, log_base, not args.no_lowercase
            )
            for doc in test_docs
        ]
    else:
        records = scoring_mod.read_score_records(args.records)
        by_id = {d.id: d for d in test_docs}
        wanted = [r for r in records if r.doc_id in by_id]
        seqs = scoring_mod.ingest_scores(wanted, by_id, log_base, not args.no_lowercase)
    scoring_mod.write_surprisals(seqs, args.out, _header(args, "score"))
    log.info("scored %d documents", len(seqs))
    return EXIT_OK


def cmd_curve(args) -> int:
    seqs = scoring_mod.read_surprisals(args.scores)
    curve = curves_mod.build_curve(seqs, args.max_position, args.min_docs)
    curves_mod.write_curve_csv(curve, args.out, _header(args, "curve"))
    if args.histogram:
        hist = curves_mod.length_histogram((len(s.values) for s in seqs), args.bucket)
        curves_mod.write_histogram_csv(hist, args.histogram, _header(args, "curve"))
    return EXIT_OK


def cmd_trend(args) -> int:
    curve = curves_mod.read_curve_csv(args.curve)
    report = trend_mod.trend_of_curve(curve, args.cutoff, args.alpha)
    print(report.summary())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            for line in _header(args, "trend"):
                f.write(f"# {line}\n")
            f.write("# note: no autocorrelation correction applied\n")
            f.write(report.to_json() + "\n")
    return EXIT_OK


def cmd_migap(args) -> int:
    local = curves_mod.read_curve_csv(args.local)
    full = curves_mod.read_curve_csv(args.full)
    gap = scoring_mod.mi_gap(local, full)
    curves_mod.write_curve_csv(gap, args.out, _header(args, "migap"))
    return EXIT_OK


def cmd_synth(args) -> int:
    with open(args.source, encoding="utf-8") as f:
        spec = json.load(f)
    source = synth_mod.MarkovSource.from_spec(spec)
    docs = synth_mod.generate(source, args.n_docs, args.seed)
    corpus_mod.write_corpus(docs, args.out, _header(args, "synth"))
    if args.entropy_out:
        max_pos = max(len(d) for d in docs)
        synth_mod.write_true_entropy_csv(source, max_pos, args.entropy_out, _header(args, "synth"))
    if args.oracle_records:
        records = synth_mod.oracle_records(source, docs)
        scoring_mod.write_score_records(records, args.oracle_records, _header(args, "synth"))
    log.info("generated %d synthetic documents", len(docs))
    return EXIT_OK


def cmd_report(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.curve:
        labelled = []
        for item in args.curve:
            label, _, path = item.rpartition("=")
            labelled.append((label or Path(path).stem, curves_mod.read_curve_csv(path)))
        report_mod.plot_curves(labelled, out_dir / "entropy_curve.png")
    if args.gap:
        gap = curves_mod.read_curve_csv(args.gap)
        report_mod.plot_curves(
            [("local - full", gap)],
            out_dir / "mi_gap.png",
            title="Mutual-information gap by word position",
            ylabel="surprisal difference (bits)",
        )
    if args.histogram:
        hist = curves_mod.read_histogram_csv(args.histogram)
        report_mod.plot_histogram(hist, out_dir / "length_histogram.png")
    return EXIT_OK


# --- argument wiring ------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--no-lowercase", action="store_true", help="keep original casing")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="entropyrate", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="split a corpus and build its vocabulary")
    p.add_argument("--corpus", required=True)
    p.add_argument("--train", required=True, help="output train manifest path")
    p.add_argument("--val", required=True, help="output validation manifest path")
    p.add_argument("--test", required=True, help="output test manifest path")
    p.add_argument("--vocab", required=True, help="output vocabulary path")
    p.add_argument("--train-size", type=int, required=True)
    p.add_argument("--val-size", type=int, required=True)
    p.add_argument("--test-size", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-count", type=int, default=5)
    _add_common(p)
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("train-ngram", help="train the interpolated trigram model")
    p.add_argument("--corpus", required=True)
    p.add_argument("--train", required=True, help="train manifest")
    p.add_argument("--vocab", required=True)
    p.add_argument("--lambda1", type=float, default=0.5)
    p.add_argument("--lambda2", type=float, default=0.3)
    p.add_argument("--title-mode", choices=["newline", "colon-newline", "omit"], default="omit")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", required=True, help="output model path")
    _add_common(p)
    p.set_defaults(func=cmd_train_ngram)

    p = sub.add_parser("score", help="produce per-word surprisal sequences")
    p.add_argument("--corpus", required=True)
    p.add_argument("--test", required=True, help="manifest of documents to score")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--model", help="trigram model file")
    src.add_argument("--records", help="external score-record file")
    p.add_argument("--vocab", help="vocabulary (required with --model)")
    p.add_argument("--title-mode", choices=["newline", "colon-newline", "omit"], default="omit")
    p.add_argument("--log-base", choices=["2", "e"], default="2")
    p.add_argument("--out", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("curve", help="aggregate surprisals into a position curve")
    p.add_argument("--scores", required=True)
    p.add_argument("--max-position", type=int, default=curves_mod.DEFAULT_MAX_POSITION)
    p.add_argument("--min-docs", type=int, default=curves_mod.DEFAULT_MIN_DOCS)
    p.add_argument("--out", required=True, help="curve CSV path")
    p.add_argument("--histogram", help="optional length histogram CSV path")
    p.add_argument("--bucket", type=int, default=50)
    p.set_defaults(func=cmd_curve)

    p = sub.add_parser("trend", help="Mann-Kendall trend test on a curve CSV")
    p.add_argument("--curve", required=True)
    p.add_argument("--cutoff", type=int, default=None)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--out", help="optional JSON report path")
    p.set_defaults(func=cmd_trend)

    p = sub.add_parser("migap", help="local minus full-context curve difference")
    p.add_argument("--local", required=True, help="local-context curve CSV")
    p.add_argument("--full", required=True, help="full-context curve CSV")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_migap)

    p = sub.add_parser("synth", help="generate a synthetic Markov corpus")
    p.add_argument("--source", required=True, help="JSON source spec")
    p.add_argument("--n-docs", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="corpus output path")
    p.add_argument("--entropy-out", help="true conditional-entropy CSV")
    p.add_argument("--oracle-records", help="exact score records for the generated docs")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("report", help="render figures from curve/histogram CSVs")
    p.add_argument("--curve", action="append", help="LABEL=PATH (repeatable)")
    p.add_argument("--gap", help="gap curve CSV")
    p.add_argument("--histogram", help="length histogram CSV")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(message)s",
    )
    if getattr(args, "title_mode", None):
        args.title_mode = args.title_mode.replace("-", "_")
    if args.command == "score" and args.model and not args.vocab:
        parser.error("--vocab is required with --model")
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"entropyrate: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ArithmeticError as exc:
        print(f"entropyrate: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
