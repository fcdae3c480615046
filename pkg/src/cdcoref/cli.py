"""Command-line interface.

Subcommands: evaluate, cluster, topics, baseline, export-pairs, pipeline.
Exit codes: 0 on success, 1 on input errors, 2 on data invariant violations.
Reports go to stdout as aligned text; --json switches to machine format.
"""

from __future__ import annotations

import argparse
import json
import sys

from .baselines import head_lemma_baseline, singleton_baseline
from .clustering import (
    ClusteringConfig,
    generate_training_pairs,
    read_mention_scores,
    read_score_file,
)
from .corpus import InvariantError, CorpusError, load_corpus
from .harness import (
    EvalConfig,
    build_response,
    load_candidates,
    run_evaluation,
    run_pipeline_from_config,
    save_partition_file,
)
from .topics import cluster_documents, tfidf_vectors, write_topics

_POLICIES = {"include": "included", "omit": "omitted"}


def _print_report(report, as_json: bool) -> None:
    print(report.to_json() if as_json else report.to_text())


def _cmd_evaluate(args) -> int:
    report = run_evaluation(args.key, args.response, _POLICIES[args.singletons])
    _print_report(report, args.json)
    return 0


def _cmd_cluster(args) -> int:
    corpus = load_corpus(args.corpus)
    clustering = ClusteringConfig(
        merge_threshold=args.tau,
        prune_ratio=args.prune_lambda,
        gold_mention_mode=args.gold_mentions,
        max_span_width=args.max_span_width,
    )
    config = EvalConfig(
        unit_level="corpus",
        mention_source="gold" if args.gold_mentions else "predicted",
        mention_type=args.type,
        clustering=clustering,
        apply_sigmoid=args.sigmoid,
    )
    pair_scores = read_score_file(args.scores)
    mention_scores = (
        read_mention_scores(args.mention_scores) if args.mention_scores else None
    )
    candidates = load_candidates(args.candidates) if args.candidates else None
    response, mentions = build_response(
        corpus, config, pair_scores, mention_scores, candidates
    )
    by_id = {m.mention_id: m for m in mentions}
    members = [by_id[mid] for c in response.clusters for mid in sorted(c)]
    if args.output:
        save_partition_file(args.output, response, members)
    else:
        json.dump({"clusters": [sorted(c) for c in response.clusters]}, sys.stdout, indent=2)
        print()
    return 0


def _cmd_topics(args) -> int:
    corpus = load_corpus(args.corpus)
    docs = [corpus.documents[d] for d in sorted(corpus.documents)]
    clusters = cluster_documents(tfidf_vectors(docs), args.threshold)
    if args.output:
        write_topics(args.output, clusters, args.threshold)
    else:
        data = {"clusters": sorted(sorted(c) for c in clusters), "threshold": args.threshold}
        json.dump(data, sys.stdout, indent=2)
        print()
    return 0


def _cmd_baseline(args) -> int:
    corpus = load_corpus(args.corpus)
    mentions = corpus.mentions_of_type(args.type)
    if args.kind == "singleton":
        partition = singleton_baseline(mentions)
    else:
        partition = head_lemma_baseline(mentions)
    if args.output:
        save_partition_file(args.output, partition, mentions)
    else:
        json.dump({"clusters": [sorted(c) for c in partition.clusters]}, sys.stdout, indent=2)
        print()
    return 0


def _cmd_export_pairs(args) -> int:
    corpus = load_corpus(args.corpus)
    mentions = corpus.mentions_of_type(args.type)
    gold = corpus.gold_partition.restricted_to(m.mention_id for m in mentions)
    pairs = generate_training_pairs(gold, args.ratio, args.seed)
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        for m1, m2, label in pairs:
            out.write(json.dumps({"m1": m1, "m2": m2, "label": label}) + "\n")
    finally:
        if args.output:
            out.close()
    return 0


def _cmd_pipeline(args) -> int:
    _, report = run_pipeline_from_config(args.config)
    _print_report(report, args.json)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cdcoref",
        description="Cross-document coreference evaluation and clustering toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evaluate", help="score a response partition against a key")
    p.add_argument("--key", required=True, help="key partition JSON file")
    p.add_argument("--response", required=True, help="response partition JSON file")
    p.add_argument("--singletons", choices=("include", "omit"), default="include")
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("cluster", help="cluster corpus mentions by pairwise score")
    p.add_argument("--corpus", required=True)
    p.add_argument("--scores", required=True, help="pairwise score JSONL file")
    p.add_argument("--mention-scores", help="per-mention score JSONL file")
    p.add_argument("--tau", type=float, required=True, help="merge stop threshold")
    p.add_argument(
        "--lambda",
        dest="prune_lambda",
        type=float,
        default=0.4,
        help="fraction of tokens kept as candidate spans",
    )
    p.add_argument("--gold-mentions", action="store_true")
    p.add_argument("--type", choices=("event", "entity", "all"), default="all")
    p.add_argument("--candidates", help="candidate mentions JSON (predicted mode)")
    p.add_argument("--max-span-width", type=int, default=15)
    p.add_argument("--sigmoid", action="store_true", help="logistic transform on scores")
    p.add_argument("--output", help="partition JSON output path (default stdout)")
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("topics", help="cluster documents into topics by tf-idf cosine")
    p.add_argument("--corpus", required=True)
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--output")
    p.set_defaults(func=_cmd_topics)

    p = sub.add_parser("baseline", help="deterministic baseline partitions")
    p.add_argument("--corpus", required=True)
    p.add_argument("--kind", choices=("singleton", "head-lemma"), required=True)
    p.add_argument("--type", choices=("event", "entity", "all"), default="all")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_baseline)

    p = sub.add_parser("export-pairs", help="labeled training pairs from gold clusters")
    p.add_argument("--corpus", required=True)
    p.add_argument("--ratio", type=int, default=20, help="negatives per positive")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--type", choices=("event", "entity", "all"), default="all")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_export_pairs)

    p = sub.add_parser("pipeline", help="full run from a JSON config file")
    p.add_argument("--config", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_pipeline)
    return parser


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors; report those as input errors (1)
        # and keep 2 reserved for data invariant violations
        return 0 if e.code == 0 else 1
    try:
        return args.func(args)
    except InvariantError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (CorpusError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
