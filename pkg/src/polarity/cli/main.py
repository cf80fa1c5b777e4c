"""Command-line entry point: ``polarity {optimize,train,predict,evaluate,stats}``."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from ..corpus import IngestError, corpus_stats, format_stats, ingest
from ..langpack import get_pack, load_pack
from ..modelsel import METRICS, TransformConfig, cross_validate, score, select_model, write_trace
from ..pipeline import PolarityModel
from ..textproc import ResourceError, default_emoticons, load_emoticons
from . import modelfile

log = logging.getLogger("polarity")

SEED_ENV = "POLARITY_SEED"


def _seed(args) -> int:
    if args.seed is not None:
        return args.seed
    value = os.environ.get(SEED_ENV)
    if value is None:
        return 0
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"{SEED_ENV}={value!r} is not an integer") from None


def _resources(args):
    pack = load_pack(args.pack) if args.pack else get_pack(args.lang)
    emoticons = load_emoticons(args.emoticons) if args.emoticons else default_emoticons()
    return pack, emoticons


def load_config(path: str | Path) -> TransformConfig:
    """Read a configuration file (JSON keyed by parameter name)."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: invalid JSON ({exc.msg})") from None
    if not isinstance(data, dict):
        raise ValueError(f"{path}: expected a JSON object")
    return TransformConfig.from_dict(data)


def _format_config(config: TransformConfig) -> str:
    return json.dumps(config.to_dict(), indent=2)


def cmd_optimize(args) -> int:
    seed = _seed(args)
    pack, emoticons = _resources(args)
    docs = ingest(args.train, args.format, lenient=args.lenient)
    result = select_model(
        docs, args.sample_size, args.include_lang, args.k, args.metric, seed,
        pack=pack, emoticons=emoticons, C=args.C, swap=not args.no_swap,
        jobs=args.jobs, report_k=args.report_k,
    )
    trace_path = args.trace or f"{args.output}.trace.tsv"
    write_trace(result.memory.trace, trace_path)
    metadata = {
        "seed": seed,
        "metric": args.metric,
        "score": result.record.score,
        "k": len(result.record.fold_scores),
        "sample_size": args.sample_size,
        "evaluations": len(result.memory),
    }
    modelfile.save(modelfile.ModelFile(result.model, metadata), args.output)
    rs_config, rs_score = result.random_best
    print(f"evaluated configurations: {len(result.memory)}")
    print(f"random-search best {args.metric}: {rs_score:.6f}")
    print(f"hill-climbing best {args.metric} ({args.k}-fold): {result.search_record.score:.6f}")
    print(f"reported {args.metric} ({len(result.record.fold_scores)}-fold CV): {result.record.score:.6f}")
    print("winning configuration:")
    print(_format_config(result.config))
    print(f"model: {args.output}")
    print(f"search trace: {trace_path}")
    return 0


def cmd_train(args) -> int:
    seed = _seed(args)
    pack, emoticons = _resources(args)
    config = load_config(args.config)
    docs = ingest(args.train, args.format, lenient=args.lenient)
    metadata = {"seed": seed, "metric": args.metric}
    if args.k:
        record = cross_validate(docs, config, args.k, args.metric, seed, pack=pack, emoticons=emoticons, C=args.C)
        metadata.update(score=record.score, k=args.k)
        print(f"{args.metric} ({args.k}-fold CV): {record.score:.6f}")
    model = PolarityModel.fit([d.text for d in docs], [d.label for d in docs], config,
                              pack=pack, emoticons=emoticons, C=args.C, seed=seed)
    modelfile.save(modelfile.ModelFile(model, metadata), args.output)
    print(f"model: {args.output}")
    return 0


def cmd_predict(args) -> int:
    model = modelfile.load(args.model).model
    docs = ingest(args.input, args.format, require_label=False, allow_empty=True, lenient=args.lenient)
    scores = model.decision_function([d.text for d in docs])
    with open(args.output, "w", encoding="utf-8") as fh:
        for doc, values in zip(docs, scores):
            row = {}
            if doc.id is not None:
                row["id"] = doc.id
            row["text"] = doc.text
            row["predicted"] = model.classes[int(values.argmax())]
            row["decision_values"] = {str(c): float(v) for c, v in zip(model.classes, values)}
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    log.info("wrote %d predictions to %s", len(docs), args.output)
    return 0


def format_report(report, metric: str) -> str:
    selected = {"accuracy": "accuracy", "macro-f1": "macro_f1", "pos-neg-f1": "pos_neg_f1"}[metric]
    lines = []
    for key, label in (("accuracy", "accuracy"), ("macro_f1", "macro-F1"), ("pos_neg_f1", "(F1pos+F1neg)/2")):
        mark = "*" if key == selected else " "
        lines.append(f"{mark} {label:<16} {getattr(report, key):.6f}")
    lines.append("")
    lines.append(f"  {'class':<10} {'precision':>10} {'recall':>10} {'F1':>10} {'support':>8}")
    for label, c in report.per_class.items():
        lines.append(f"  {str(label):<10} {c.precision:>10.6f} {c.recall:>10.6f} {c.f1:>10.6f} {c.support:>8d}")
    return "\n".join(lines)


def cmd_evaluate(args) -> int:
    model = modelfile.load(args.model).model
    docs = ingest(args.gold, args.format, lenient=args.lenient)
    predicted = model.predict([d.text for d in docs])
    report = score(predicted, [d.label for d in docs])
    if args.json:
        print(json.dumps(report.as_dict(), indent=2))
    else:
        print(format_report(report, args.metric))
    return 0


def cmd_stats(args) -> int:
    docs = ingest(args.corpus, args.format, lenient=args.lenient)
    stats = corpus_stats(docs)
    if args.json:
        print(json.dumps(stats))
    else:
        print(format_stats(stats, Path(args.corpus).name))
    return 0


def _common(p: argparse.ArgumentParser, *, resources: bool = False, seed: bool = False) -> None:
    p.add_argument("--format", choices=("jsonl", "tsv"), help="corpus format (default: from the extension)")
    p.add_argument("--lenient", action="store_true", help="skip malformed lines instead of aborting")
    if resources:
        p.add_argument("--lang", help="bundled language pack (en, es, it); others get an empty pack")
        p.add_argument("--pack", help="language pack file (overrides --lang)")
        p.add_argument("--emoticons", help="emoticon map file (default: bundled)")
        p.add_argument("-C", "--C", type=float, default=1.0, dest="C", help="SVM regularisation (default 1.0)")
    if seed:
        p.add_argument("--seed", type=int, help=f"random seed (default: ${SEED_ENV} or 0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polarity", description="Polarity classification with searched text transformations.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("optimize", help="search the configuration space and train the winner")
    p.add_argument("train")
    p.add_argument("-o", "--output", required=True, help="model file to write")
    p.add_argument("--sample-size", type=int, default=32)
    p.add_argument("--include-lang", action="store_true", help="also search stem, neg and sw")
    p.add_argument("-k", "--k", type=int, default=5, help="folds during the search (default 5)")
    p.add_argument("--report-k", type=int, default=None, help="folds for the reported score (default: same as -k)")
    p.add_argument("--metric", choices=sorted(METRICS), default="accuracy")
    p.add_argument("--jobs", type=int, default=None, help="parallel evaluations (default: all CPUs)")
    p.add_argument("--trace", help="search trace path (default: <output>.trace.tsv)")
    p.add_argument("--no-swap", action="store_true", help="tokenizer moves: add/remove only")
    _common(p, resources=True, seed=True)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("train", help="train one fixed configuration")
    p.add_argument("train")
    p.add_argument("--config", required=True, help="configuration file (JSON)")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("-k", "--k", type=int, default=0, help="also report k-fold CV (0 = skip)")
    p.add_argument("--metric", choices=sorted(METRICS), default="accuracy")
    _common(p, resources=True, seed=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="label new texts")
    p.add_argument("model")
    p.add_argument("input")
    p.add_argument("-o", "--output", required=True)
    _common(p)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="score a model on a labeled gold file")
    p.add_argument("model")
    p.add_argument("gold")
    p.add_argument("--metric", choices=sorted(METRICS), default="accuracy")
    p.add_argument("--json", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("stats", help="count documents per label")
    p.add_argument("corpus")
    p.add_argument("--json", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except modelfile.CorruptModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (IngestError, ResourceError, modelfile.ModelFileError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
