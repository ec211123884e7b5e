"""Command-line surface for the pipeline.

Exit codes: 0 success, 2 usage or input error, 3 internal invariant
violation. Data goes to stdout (or -o); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import nullcontext
from typing import Optional

from .analysis import (
    annotate_keyphrases,
    compute_topic_signatures,
    corpus_counts,
    load_stopwords,
    read_background_counts,
    split_sentences,
)
from .corpus import CorpusError, document_to_record, read_corpus
from .metrics import corpus_stats, evaluate
from .sampling import subsample
from .tasks import ALL_KINDS, MixtureSpec, TaskKind, forge_corpus, write_samples


class UsageError(Exception):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taskforge",
        description="Convert a (title, keyphrases, target) corpus into a "
                    "multi-task training mixture; subsample and evaluate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", help="flat JSON config file; flags override it")
        p.add_argument("--stopwords", help="stopword file, one word per line")
        p.add_argument("-o", "--out", help="output path (default: stdout)")

    p_stats = sub.add_parser("stats", help="corpus statistics as JSON")
    p_stats.add_argument("corpus")
    add_common(p_stats)

    p_forge = sub.add_parser("forge", help="forge the multi-task sample mixture")
    p_forge.add_argument("corpus")
    add_common(p_forge)
    p_forge.add_argument("--seed", type=int, help="required; all randomness derives from it")
    p_forge.add_argument("--report", help="report path (default: OUT.report.json or stderr)")
    p_forge.add_argument("--workers", type=int, help="parallel document workers (default 1)")
    p_forge.add_argument("--kinds", help="comma-separated task kinds (default all): "
                         + ",".join(k.value for k in ALL_KINDS))
    p_forge.add_argument("--threshold", type=float, help="topic-signature LLR cut (default 10.83)")
    p_forge.add_argument("--max-phrase-len", type=int, help="max keyphrase tokens (default 5)")
    p_forge.add_argument("--distinguish-rate", type=float,
                         help="positive-option probability (default 0.5)")
    p_forge.add_argument("--shuffle-fallback", choices=["skip", "substitute"],
                         help="handling of degenerate revise variants (default skip)")
    p_forge.add_argument("--corrupt-fraction", type=float,
                         help="fraction of keyphrases to replace (default 1.0)")
    p_forge.add_argument("--grouping", choices=["per_document", "corpus"],
                         help="topic-signature foreground grouping (default per_document)")
    p_forge.add_argument("--background", help="word<TAB>count background file")
    p_forge.add_argument("--plan-with-keyphrases", action="store_true", default=None,
                         help="include keyphrases in the planning source")

    p_sample = sub.add_parser("sample", help="deterministic few-shot subsample")
    p_sample.add_argument("corpus")
    add_common(p_sample)
    p_sample.add_argument("--fraction", type=float, help="fraction in (0, 1]")
    p_sample.add_argument("--seed", type=int, help="required")

    p_eval = sub.add_parser("eval", help="BLEU-3 / ROUGE-L F / meteor_lite report")
    add_common(p_eval)
    p_eval.add_argument("--hyp", help="hypothesis file, one text per line")
    p_eval.add_argument("--ref", help="reference file, line-aligned with --hyp")
    p_eval.add_argument("--jsonl", help="JSONL with 'hypothesis'/'reference' keys")

    p_sig = sub.add_parser("signatures", help="topic-signature scores as TSV")
    p_sig.add_argument("corpus")
    add_common(p_sig)
    p_sig.add_argument("--background", help="word<TAB>count background file (required)")
    p_sig.add_argument("--threshold", type=float, help="LLR cut (default 10.83)")

    return parser


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    """Fill unset flags from the config file; explicit flags win."""
    if not getattr(args, "config", None):
        return args
    try:
        with open(args.config, encoding="utf-8") as fh:
            config = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}")
    if not isinstance(config, dict):
        raise UsageError("config file must hold a flat JSON object")
    for key, value in config.items():
        attr = key.replace("-", "_")
        if hasattr(args, attr) and getattr(args, attr) is None:
            setattr(args, attr, value)
    return args


def _require(args, name: str):
    value = getattr(args, name, None)
    if value is None:
        raise UsageError(f"--{name.replace('_', '-')} is required")
    return value


def _open_out(path: Optional[str]):
    if path:
        return open(path, "w", encoding="utf-8", newline="\n")
    return nullcontext(sys.stdout)


def _load_documents(path: str, stopword_path: Optional[str]):
    stopwords = load_stopwords(stopword_path)
    derive = lambda text: split_sentences(text, stopwords)
    try:
        with open(path, encoding="utf-8") as fh:
            docs = list(read_corpus(fh, derive))
    except OSError as exc:
        raise UsageError(str(exc))
    return docs, stopwords


def _cmd_stats(args) -> int:
    docs, _ = _load_documents(args.corpus, args.stopwords)
    if not docs:
        raise UsageError("empty corpus")
    stats = corpus_stats(docs)
    with _open_out(args.out) as out:
        json.dump(stats.to_dict(), out)
        out.write("\n")
    return 0


def _cmd_forge(args) -> int:
    seed = _require(args, "seed")
    docs, stopwords = _load_documents(args.corpus, args.stopwords)

    background = None
    if args.background:
        with open(args.background, encoding="utf-8") as fh:
            background = read_background_counts(fh)

    docs = annotate_keyphrases(
        docs,
        stopwords=stopwords,
        threshold=args.threshold if args.threshold is not None else 10.83,
        max_len=args.max_phrase_len if args.max_phrase_len is not None else 5,
        grouping=args.grouping or "per_document",
        background_counts=background,
    )

    if args.kinds:
        kinds = args.kinds if isinstance(args.kinds, list) else args.kinds.split(",")
        try:
            enabled = frozenset(TaskKind(k.strip()) for k in kinds)
        except ValueError as exc:
            raise UsageError(f"unknown task kind: {exc}")
    else:
        enabled = frozenset(ALL_KINDS)

    spec = MixtureSpec(
        enabled=enabled,
        distinguish_positive_rate=(args.distinguish_rate
                                   if args.distinguish_rate is not None else 0.5),
        shuffle_fallback=args.shuffle_fallback or "skip",
        corrupt_fraction=(args.corrupt_fraction
                          if args.corrupt_fraction is not None else 1.0),
        plan_source_includes_keyphrases=bool(args.plan_with_keyphrases),
    )
    workers = args.workers if args.workers is not None else 1

    samples, report = forge_corpus(docs, seed=int(seed), spec=spec, workers=workers)
    with _open_out(args.out) as out:
        write_samples(samples, out)

    report_json = json.dumps(report.to_dict(), indent=2)
    report_path = args.report or (f"{args.out}.report.json" if args.out else None)
    if report_path:
        with open(report_path, "w", encoding="utf-8") as fh:
            fh.write(report_json + "\n")
    else:
        print(report_json, file=sys.stderr)
    return 0


def _cmd_sample(args) -> int:
    seed = _require(args, "seed")
    fraction = _require(args, "fraction")
    docs, _ = _load_documents(args.corpus, args.stopwords)
    subset = subsample(docs, float(fraction), int(seed))
    with _open_out(args.out) as out:
        for doc in subset:
            out.write(json.dumps(document_to_record(doc), ensure_ascii=False) + "\n")
    return 0


def _read_pairs(args) -> tuple[list[str], list[str]]:
    if args.jsonl:
        hyps, refs = [], []
        with open(args.jsonl, encoding="utf-8") as fh:
            for line_no, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    record = json.loads(line)
                    hyps.append(record["hypothesis"])
                    refs.append(record["reference"])
                except (json.JSONDecodeError, KeyError, TypeError):
                    raise UsageError(
                        f"{args.jsonl}:{line_no}: need JSON objects with "
                        "'hypothesis' and 'reference'"
                    )
        return hyps, refs
    if not (args.hyp and args.ref):
        raise UsageError("eval needs --hyp and --ref, or --jsonl")
    with open(args.hyp, encoding="utf-8") as fh:
        hyps = [line.rstrip("\n") for line in fh]
    with open(args.ref, encoding="utf-8") as fh:
        refs = [line.rstrip("\n") for line in fh]
    if len(hyps) != len(refs):
        raise UsageError("hypothesis and reference files differ in length")
    return hyps, refs


def _cmd_eval(args) -> int:
    hyps, refs = _read_pairs(args)
    if not hyps:
        raise UsageError("empty corpus")
    report = evaluate(hyps, refs)
    with _open_out(args.out) as out:
        json.dump(report.to_dict(), out)
        out.write("\n")
    return 0


def _cmd_signatures(args) -> int:
    background_path = _require(args, "background")
    docs, _ = _load_documents(args.corpus, args.stopwords)
    if not docs:
        raise UsageError("empty corpus")
    with open(background_path, encoding="utf-8") as fh:
        background = read_background_counts(fh)
    threshold = args.threshold if args.threshold is not None else 10.83
    model = compute_topic_signatures(corpus_counts(docs), background, threshold)
    ranked = sorted(model.scores.items(), key=lambda kv: (-kv[1], kv[0]))
    with _open_out(args.out) as out:
        for word, score in ranked:
            out.write(f"{word}\t{score:.6f}\n")
    return 0


_COMMANDS = {
    "stats": _cmd_stats,
    "forge": _cmd_forge,
    "sample": _cmd_sample,
    "eval": _cmd_eval,
    "signatures": _cmd_signatures,
}


def main(argv: Optional[list[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        args = _merge_config(args)
        return _COMMANDS[args.command](args)
    except (UsageError, CorpusError, ValueError, OSError) as exc:
        print(f"taskforge: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # internal invariant violation
        print(f"taskforge: internal error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
