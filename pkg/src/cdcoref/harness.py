"""End-to-end orchestration: evaluation units, pipeline runs, partition files.

A pipeline run selects mentions per evaluation unit (a set of documents),
clusters them, and pools the per-unit clusters into one response partition
that is scored once against the corpus-wide key. Response clusters never
cross units; key clusters are left whole, so gold clusters spanning units
penalize per-unit responses instead of being macro-averaged away.

Key/response matching uses exact span identity (doc_id, start_token,
end_token), so predicted spans line up with gold spans regardless of ids.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from typing import Mapping, Sequence

from .clustering import (
    ClusteringConfig,
    ScoreTable,
    agglomerative_cluster_trace,
    combine_pair_score,
    prune_spans,
    read_mention_scores,
    read_score_file,
)
from .corpus import (
    Corpus,
    InvariantError,
    Mention,
    Partition,
    SchemaError,
    load_corpus,
    mention_from_json,
    mention_to_json,
)
from .metrics import SINGLETON_POLICIES, MetricReport, evaluate
from .topics import cluster_documents, tfidf_vectors

UNIT_LEVELS = ("gold_subtopic", "gold_topic", "predicted_topic", "corpus")
MENTION_SOURCES = ("gold", "predicted")
MENTION_TYPE_CHOICES = ("event", "entity", "all")


@dataclass(frozen=True)
class EvalConfig:
    """Full configuration of one evaluation run."""

    unit_level: str = "gold_topic"
    mention_source: str = "gold"
    singleton_policy: str = "included"
    mention_type: str = "all"
    clustering: ClusteringConfig | None = None
    doc_threshold: float | None = None
    apply_sigmoid: bool = False

    def __post_init__(self):
        if self.unit_level not in UNIT_LEVELS:
            raise ValueError(f"unknown unit_level {self.unit_level!r}")
        if self.mention_source not in MENTION_SOURCES:
            raise ValueError(f"unknown mention_source {self.mention_source!r}")
        if self.singleton_policy not in SINGLETON_POLICIES:
            raise ValueError(f"unknown singleton_policy {self.singleton_policy!r}")
        if self.mention_type not in MENTION_TYPE_CHOICES:
            raise ValueError(f"unknown mention_type {self.mention_type!r}")
        if self.unit_level == "predicted_topic":
            if self.doc_threshold is None or not math.isfinite(self.doc_threshold):
                raise ValueError("predicted_topic requires a finite doc_threshold")
        if self.clustering is None:
            object.__setattr__(
                self,
                "clustering",
                ClusteringConfig.for_mention_type(
                    self.mention_type,
                    gold_mention_mode=self.mention_source == "gold",
                ),
            )


def evaluation_units(
    corpus: Corpus, config: EvalConfig
) -> list[tuple[str, frozenset[str]]]:
    """Deterministically ordered (unit_id, doc_ids) pairs for one run."""
    if config.unit_level == "corpus":
        return [("corpus", frozenset(corpus.documents))]
    if config.unit_level == "predicted_topic":
        docs = [corpus.documents[d] for d in sorted(corpus.documents)]
        clusters = cluster_documents(tfidf_vectors(docs), config.doc_threshold)
        return [
            (f"predicted_{i}", frozenset(cluster))
            for i, cluster in enumerate(clusters)
        ]
    groups: dict[str, set[str]] = {}
    for doc in corpus.documents.values():
        if config.unit_level == "gold_topic":
            unit_id = doc.topic_id
        else:
            unit_id = f"{doc.topic_id}/{doc.subtopic_id}"
        groups.setdefault(unit_id, set()).add(doc.doc_id)
    return [(uid, frozenset(groups[uid])) for uid in sorted(groups)]


def _sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    e = math.exp(x)
    return e / (1.0 + e)


def _combined_scores(
    mentions: Sequence[Mention],
    pair_scores: ScoreTable,
    mention_scores: Mapping[str, float] | None,
    config: ClusteringConfig,
    apply_sigmoid: bool,
) -> ScoreTable:
    """Materialize final merge scores for one unit's mention pairs."""

    def span_score(m: Mention) -> float:
        if mention_scores is not None and m.mention_id in mention_scores:
            return mention_scores[m.mention_id]
        if m.mention_score is None:
            raise SchemaError(f"mention {m.mention_id!r} has no mention score")
        return m.mention_score

    entries = {}
    for i, a in enumerate(mentions):
        for b in mentions[i + 1 :]:
            raw = pair_scores.get(a.mention_id, b.mention_id)
            if raw == float("-inf"):
                continue  # unscored pair: never merged
            if config.gold_mention_mode:
                s = combine_pair_score(0.0, 0.0, raw, gold_mention_mode=True)
            else:
                s = combine_pair_score(span_score(a), span_score(b), raw)
            if apply_sigmoid:
                s = _sigmoid(s)
            entries[a.mention_id, b.mention_id] = s
    return ScoreTable(entries)


def partition_on_spans(
    partition: Partition, mentions: Sequence[Mention]
) -> Partition:
    """Re-key a partition from mention ids to span identity.

    Mentions with identical spans inside one cluster collapse into one;
    identical spans across clusters violate disjointness and raise.
    """
    spans = {m.mention_id: m.span() for m in mentions}
    missing = partition.mentions() - spans.keys()
    if missing:
        raise SchemaError(f"partition references unknown mentions: {sorted(missing)[:5]}")
    try:
        return Partition({spans[m] for m in c} for c in partition.clusters)
    except InvariantError as e:
        raise InvariantError(f"span identity is ambiguous across clusters: {e}") from e


def build_response(
    corpus: Corpus,
    config: EvalConfig,
    pair_scores: ScoreTable | None = None,
    mention_scores: Mapping[str, float] | None = None,
    candidates: Sequence[Mention] | None = None,
) -> tuple[Partition, list[Mention]]:
    """Cluster per evaluation unit and pool the clusters.

    Returns the pooled response partition over mention ids, plus the mentions
    that survived selection (gold mentions, or pruned candidates).
    """
    if pair_scores is None:
        pair_scores = ScoreTable()

    if config.mention_source == "predicted":
        if candidates is None:
            raise SchemaError("predicted mention_source requires candidate mentions")
        pool = [
            m
            for m in candidates
            if (config.mention_type == "all" or m.mention_type == config.mention_type)
            and m.width() <= config.clustering.max_span_width
        ]
        if mention_scores is not None:
            pool = [
                m
                if m.mention_id not in mention_scores
                else Mention(
                    m.mention_id,
                    m.doc_id,
                    m.start_token,
                    m.end_token,
                    m.mention_type,
                    m.head_lemma,
                    mention_scores[m.mention_id],
                )
                for m in pool
            ]
    else:
        pool = corpus.mentions_of_type(config.mention_type)

    response_clusters: list[frozenset] = []
    response_mentions: list[Mention] = []
    for _, doc_ids in evaluation_units(corpus, config):
        unit = [m for m in pool if m.doc_id in doc_ids]
        if config.mention_source == "predicted":
            unit = prune_spans(
                unit, config.clustering.prune_ratio, corpus.token_count(doc_ids)
            )
        if not unit:
            continue
        response_mentions.extend(unit)
        combined = _combined_scores(
            unit, pair_scores, mention_scores, config.clustering, config.apply_sigmoid
        )
        part, _ = agglomerative_cluster_trace(
            unit, combined, config.clustering.merge_threshold
        )
        response_clusters.extend(part.clusters)
    return Partition(response_clusters), response_mentions


def run_pipeline(
    corpus: Corpus,
    config: EvalConfig,
    pair_scores: ScoreTable | None = None,
    mention_scores: Mapping[str, float] | None = None,
    candidates: Sequence[Mention] | None = None,
) -> tuple[Partition, MetricReport]:
    """Cluster per evaluation unit, pool, and score against the gold key.

    Returns the pooled response partition (over mention ids) and the metric
    report computed on span identity under the configured singleton policy.
    """
    response, response_mentions = build_response(
        corpus, config, pair_scores, mention_scores, candidates
    )
    gold = corpus.mentions_of_type(config.mention_type)
    key = corpus.gold_partition.restricted_to(m.mention_id for m in gold)
    report = evaluate(
        partition_on_spans(key, gold),
        partition_on_spans(response, response_mentions),
        config.singleton_policy,
    )
    return response, report


# --- partition files ---------------------------------------------------------


def load_partition_file(path) -> tuple[Partition, list[Mention] | None]:
    """Read {"mentions"?: [...], "clusters": [[mention_id, ...], ...]}."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaError(
                f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}"
            ) from e
    if not isinstance(data, dict) or "clusters" not in data:
        raise SchemaError(f"{path}: expected an object with a 'clusters' field")
    clusters = data["clusters"]
    if not isinstance(clusters, list) or not all(
        isinstance(c, list) and all(isinstance(m, str) for m in c) for c in clusters
    ):
        raise SchemaError(f"{path}: 'clusters' must be lists of mention ids")
    mentions = None
    if "mentions" in data:
        if not isinstance(data["mentions"], list):
            raise SchemaError(f"{path}: 'mentions' must be a list")
        mentions = [
            mention_from_json(obj, f"{path}: mentions[{i}]")
            for i, obj in enumerate(data["mentions"])
        ]
        known = {m.mention_id for m in mentions}
        unknown = {m for c in clusters for m in c} - known
        if unknown:
            raise SchemaError(f"{path}: clusters reference unknown mentions {sorted(unknown)[:5]}")
    return Partition(clusters), mentions


def save_partition_file(
    path, partition: Partition, mentions: Sequence[Mention] | None = None
) -> None:
    data: dict = {}
    if mentions is not None:
        data["mentions"] = [mention_to_json(m) for m in mentions]
    data["clusters"] = [sorted(c) for c in partition.clusters]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")


def run_evaluation(key_path, response_path, singleton_policy: str) -> MetricReport:
    """Score two partition files against each other.

    When both files carry mention tables, matching happens on span identity;
    otherwise raw mention ids are compared directly.
    """
    key, key_mentions = load_partition_file(key_path)
    response, response_mentions = load_partition_file(response_path)
    if key_mentions is not None and response_mentions is not None:
        key = partition_on_spans(key, key_mentions)
        response = partition_on_spans(response, response_mentions)
    return evaluate(key, response, singleton_policy)


# --- pipeline config files ---------------------------------------------------


def run_pipeline_from_config(config_path) -> tuple[Partition, MetricReport]:
    """Execute a pipeline described by a JSON config file.

    The config mirrors EvalConfig plus input paths (resolved relative to the
    config file): {"corpus", "unit_level", "mention_source",
    "singleton_policy", "mention_type", "clustering": {"tau", "lambda",
    "gold_mention_mode", "max_span_width"}, "doc_threshold", "sigmoid",
    "scores", "mention_scores", "candidates", "output"}.
    """
    with open(config_path, encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaError(f"{config_path}: invalid JSON: {e.msg}") from e
    if not isinstance(raw, dict):
        raise SchemaError(f"{config_path}: expected a JSON object")
    if "corpus" not in raw:
        raise SchemaError(f"{config_path}: missing 'corpus' path")
    base = os.path.dirname(os.path.abspath(config_path))

    def resolve(key):
        value = raw.get(key)
        return None if value is None else os.path.join(base, value)

    clustering = None
    if "clustering" in raw:
        cc = raw["clustering"]
        if not isinstance(cc, dict) or "tau" not in cc or "lambda" not in cc:
            raise SchemaError(f"{config_path}: clustering needs 'tau' and 'lambda'")
        clustering = ClusteringConfig(
            merge_threshold=cc["tau"],
            prune_ratio=cc["lambda"],
            gold_mention_mode=cc.get("gold_mention_mode", raw.get("mention_source", "gold") == "gold"),
            max_span_width=cc.get("max_span_width", 15),
        )
    try:
        config = EvalConfig(
            unit_level=raw.get("unit_level", "gold_topic"),
            mention_source=raw.get("mention_source", "gold"),
            singleton_policy=raw.get("singleton_policy", "included"),
            mention_type=raw.get("mention_type", "all"),
            clustering=clustering,
            doc_threshold=raw.get("doc_threshold"),
            apply_sigmoid=bool(raw.get("sigmoid", False)),
        )
    except ValueError as e:
        raise SchemaError(f"{config_path}: {e}") from e

    corpus = load_corpus(resolve("corpus"))
    pair_scores = read_score_file(resolve("scores")) if raw.get("scores") else None
    mention_scores = (
        read_mention_scores(resolve("mention_scores"))
        if raw.get("mention_scores")
        else None
    )
    candidates = None
    if raw.get("candidates"):
        candidates = load_candidates(resolve("candidates"))

    response, report = run_pipeline(
        corpus, config, pair_scores, mention_scores, candidates
    )
    if raw.get("output"):
        by_id = {m.mention_id: m for m in corpus.gold_mentions}
        if candidates:
            by_id.update({m.mention_id: m for m in candidates})
        members = [by_id[mid] for c in response.clusters for mid in sorted(c)]
        save_partition_file(resolve("output"), response, members)
    return response, report


def load_candidates(path) -> list[Mention]:
    """Read candidate mentions: {"mentions": [...]} with the corpus schema."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaError(f"{path}: invalid JSON: {e.msg}") from e
    if not isinstance(data, dict) or not isinstance(data.get("mentions"), list):
        raise SchemaError(f"{path}: expected an object with a 'mentions' list")
    mentions = [
        mention_from_json(obj, f"{path}: mentions[{i}]")
        for i, obj in enumerate(data["mentions"])
    ]
    seen = set()
    for m in mentions:
        if m.mention_id in seen:
            raise InvariantError(f"duplicate candidate mention_id {m.mention_id!r}")
        seen.add(m.mention_id)
    return mentions
