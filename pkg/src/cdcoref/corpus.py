"""Corpus data model and JSON I/O: documents, mentions, coreference partitions.

The on-disk corpus is a single JSON object:

    {"documents": [{"doc_id", "topic_id", "subtopic_id",
                    "tokens": [{"sentence", "text"}, ...]}, ...],
     "mentions":  [{"mention_id", "doc_id", "start_token", "end_token",
                    "type", "head_lemma"?, "score"?}, ...],
     "clusters":  [[mention_id, ...], ...],
     "split":     "train" | "validation" | "test"}        # optional

Token indices are document-global positions (0-based, contiguous); mention
spans are inclusive token ranges. Mentions listed in no cluster are treated
as singleton clusters, so gold singletons may be written either way.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

MENTION_TYPES = ("event", "entity")
SPLITS = ("train", "validation", "test")


class CorpusError(Exception):
    """Base class for corpus and partition input problems."""


class SchemaError(CorpusError):
    """Malformed input: bad JSON, missing fields, wrong types."""


class InvariantError(CorpusError):
    """Well-formed input that violates a data invariant."""


@dataclass(frozen=True)
class Token:
    doc_id: str
    sentence_index: int
    token_index: int
    text: str


@dataclass(frozen=True)
class Document:
    doc_id: str
    topic_id: str
    subtopic_id: str
    tokens: tuple[Token, ...]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass(frozen=True)
class Mention:
    """A typed token span. `start_token`/`end_token` are inclusive."""

    mention_id: str
    doc_id: str
    start_token: int
    end_token: int
    mention_type: str
    head_lemma: str | None = None
    mention_score: float | None = None

    def span(self) -> tuple[str, int, int]:
        """Identity key used to match mentions across partitions."""
        return (self.doc_id, self.start_token, self.end_token)

    def width(self) -> int:
        return self.end_token - self.start_token + 1


class Partition:
    """Disjoint, non-empty clusters over mention identifiers.

    Clusters are stored in a canonical order (sorted by member list), so two
    partitions with the same clusters compare equal regardless of input order.
    """

    __slots__ = ("clusters", "mention_index")

    def __init__(self, clusters: Iterable[Iterable] = ()):
        canon = []
        for raw in clusters:
            members = frozenset(raw)
            if not members:
                raise InvariantError("partition contains an empty cluster")
            canon.append(members)
        canon.sort(key=lambda c: sorted(c))
        index: dict = {}
        for i, cluster in enumerate(canon):
            for m in cluster:
                if m in index:
                    raise InvariantError(
                        f"mention {m!r} appears in more than one cluster"
                    )
                index[m] = i
        self.clusters: tuple[frozenset, ...] = tuple(canon)
        self.mention_index: dict = index

    def mentions(self) -> frozenset:
        return frozenset(self.mention_index)

    def cluster_of(self, mention) -> frozenset | None:
        i = self.mention_index.get(mention)
        return None if i is None else self.clusters[i]

    def restricted_to(self, keep: Iterable) -> "Partition":
        """Intersect every cluster with `keep`; empty remnants are dropped."""
        keep = set(keep)
        return Partition(c & keep for c in self.clusters if c & keep)

    def relabeled(self, mapping: Mapping) -> "Partition":
        """Rename every member through `mapping` (must be injective)."""
        return Partition({mapping[m] for m in c} for c in self.clusters)

    def __len__(self) -> int:
        return len(self.clusters)

    def __iter__(self) -> Iterator[frozenset]:
        return iter(self.clusters)

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and self.clusters == other.clusters

    def __hash__(self) -> int:
        return hash(self.clusters)

    def __repr__(self) -> str:
        return f"Partition({[sorted(c) for c in self.clusters]})"


@dataclass(frozen=True)
class Corpus:
    documents: dict[str, Document]
    gold_mentions: tuple[Mention, ...]
    gold_partition: Partition
    split: str = "test"

    def __post_init__(self):
        if self.split not in SPLITS:
            raise SchemaError(f"unknown split {self.split!r}; expected one of {SPLITS}")
        seen = set()
        for m in self.gold_mentions:
            if m.mention_id in seen:
                raise InvariantError(f"duplicate mention_id {m.mention_id!r}")
            seen.add(m.mention_id)
            _check_mention(m, self.documents)
        if self.gold_partition.mentions() != seen:
            missing = sorted(seen - self.gold_partition.mentions())
            extra = sorted(self.gold_partition.mentions() - seen)
            raise InvariantError(
                "gold partition does not cover the mention set exactly "
                f"(unclustered: {missing[:5]}, unknown: {extra[:5]})"
            )

    def mention_by_id(self, mention_id: str) -> Mention:
        for m in self.gold_mentions:
            if m.mention_id == mention_id:
                return m
        raise KeyError(mention_id)

    def mentions_of_type(self, mention_type: str) -> list[Mention]:
        """Gold mentions of one type, or all of them for `"all"`."""
        if mention_type == "all":
            return list(self.gold_mentions)
        if mention_type not in MENTION_TYPES:
            raise SchemaError(f"unknown mention type {mention_type!r}")
        return [m for m in self.gold_mentions if m.mention_type == mention_type]

    def token_count(self, doc_ids: Iterable[str] | None = None) -> int:
        ids = self.documents.keys() if doc_ids is None else doc_ids
        return sum(len(self.documents[d]) for d in ids)


def _check_mention(m: Mention, documents: Mapping[str, Document]) -> None:
    if m.mention_type not in MENTION_TYPES:
        raise SchemaError(
            f"mention {m.mention_id!r}: unknown type {m.mention_type!r}"
        )
    doc = documents.get(m.doc_id)
    if doc is None:
        raise InvariantError(
            f"mention {m.mention_id!r} references unknown document {m.doc_id!r}"
        )
    if not (0 <= m.start_token <= m.end_token):
        raise InvariantError(
            f"mention {m.mention_id!r}: bad span "
            f"({m.start_token}, {m.end_token})"
        )
    if m.end_token >= len(doc):
        raise InvariantError(
            f"mention {m.mention_id!r}: end_token {m.end_token} outside "
            f"document {m.doc_id!r} ({len(doc)} tokens)"
        )


def filter_singletons(partition: Partition) -> Partition:
    """Drop size-1 clusters. Idempotent; never invents or splits clusters."""
    return Partition(c for c in partition.clusters if len(c) >= 2)


def restrict_to_unit(
    corpus: Corpus, doc_ids: Iterable[str]
) -> tuple[list[Mention], Partition]:
    """Project gold mentions and clusters onto one evaluation unit.

    Clusters are intersected with the unit's mention set; empty remnants are
    dropped, singleton remnants are kept. Mention order follows the corpus.
    """
    doc_ids = set(doc_ids)
    unknown = doc_ids - corpus.documents.keys()
    if unknown:
        raise InvariantError(f"unknown doc_id(s) in unit: {sorted(unknown)}")
    kept = [m for m in corpus.gold_mentions if m.doc_id in doc_ids]
    part = corpus.gold_partition.restricted_to(m.mention_id for m in kept)
    return kept, part


# --- JSON (de)serialization ---------------------------------------------------


def _require(obj: Mapping, key: str, kind: type, where: str):
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{where}: expected an object")
    if key not in obj:
        raise SchemaError(f"{where}: missing field {key!r}")
    value = obj[key]
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise SchemaError(f"{where}.{key}: expected a number")
        return float(value)
    if kind is int and isinstance(value, bool):
        raise SchemaError(f"{where}.{key}: expected an integer")
    if not isinstance(value, kind):
        raise SchemaError(f"{where}.{key}: expected {kind.__name__}")
    return value


def mention_from_json(obj: Mapping, where: str = "mention") -> Mention:
    head = obj.get("head_lemma") if isinstance(obj, Mapping) else None
    if head is not None and not isinstance(head, str):
        raise SchemaError(f"{where}.head_lemma: expected a string")
    score = obj.get("score") if isinstance(obj, Mapping) else None
    if score is not None:
        if isinstance(score, bool) or not isinstance(score, (int, float)):
            raise SchemaError(f"{where}.score: expected a number")
        score = float(score)
    return Mention(
        mention_id=_require(obj, "mention_id", str, where),
        doc_id=_require(obj, "doc_id", str, where),
        start_token=_require(obj, "start_token", int, where),
        end_token=_require(obj, "end_token", int, where),
        mention_type=_require(obj, "type", str, where),
        head_lemma=head,
        mention_score=score,
    )


def mention_to_json(m: Mention) -> dict:
    obj = {
        "mention_id": m.mention_id,
        "doc_id": m.doc_id,
        "start_token": m.start_token,
        "end_token": m.end_token,
        "type": m.mention_type,
    }
    if m.head_lemma is not None:
        obj["head_lemma"] = m.head_lemma
    if m.mention_score is not None:
        obj["score"] = m.mention_score
    return obj


def _document_from_json(obj: Mapping, where: str) -> Document:
    doc_id = _require(obj, "doc_id", str, where)
    tokens = _require(obj, "tokens", list, where)
    parsed = []
    for t, tok in enumerate(tokens):
        twhere = f"{where}.tokens[{t}]"
        sentence = _require(tok, "sentence", int, twhere)
        text = _require(tok, "text", str, twhere)
        if sentence < 0:
            raise SchemaError(f"{twhere}.sentence: negative sentence index")
        if not text:
            raise SchemaError(f"{twhere}.text: empty token text")
        parsed.append(Token(doc_id, sentence, t, text))
    return Document(
        doc_id=doc_id,
        topic_id=_require(obj, "topic_id", str, where),
        subtopic_id=_require(obj, "subtopic_id", str, where),
        tokens=tuple(parsed),
    )


def load_corpus(path) -> Corpus:
    """Read a corpus JSON file, validating schema and data invariants."""
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as e:
            raise SchemaError(
                f"{path}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}"
            ) from e
    if not isinstance(data, Mapping):
        raise SchemaError(f"{path}: top level must be an object")

    documents: dict[str, Document] = {}
    for d, obj in enumerate(_require(data, "documents", list, str(path))):
        doc = _document_from_json(obj, f"documents[{d}]")
        if doc.doc_id in documents:
            raise InvariantError(f"duplicate doc_id {doc.doc_id!r}")
        documents[doc.doc_id] = doc

    mentions = [
        mention_from_json(obj, f"mentions[{i}]")
        for i, obj in enumerate(_require(data, "mentions", list, str(path)))
    ]
    by_id = {m.mention_id: m for m in mentions}

    clusters = []
    clustered = set()
    for c, raw in enumerate(_require(data, "clusters", list, str(path))):
        if not isinstance(raw, list):
            raise SchemaError(f"clusters[{c}]: expected a list of mention ids")
        for mid in raw:
            if not isinstance(mid, str):
                raise SchemaError(f"clusters[{c}]: expected string mention ids")
            if mid not in by_id:
                raise SchemaError(f"clusters[{c}]: unknown mention_id {mid!r}")
        clusters.append(raw)
        clustered.update(raw)
    # unlisted mentions become singletons
    clusters.extend([m.mention_id] for m in mentions if m.mention_id not in clustered)

    split = data.get("split", "test")
    if not isinstance(split, str):
        raise SchemaError(f"{path}.split: expected a string")
    return Corpus(
        documents=documents,
        gold_mentions=tuple(mentions),
        gold_partition=Partition(clusters),
        split=split,
    )


def save_corpus(corpus: Corpus, path) -> None:
    """Write a corpus JSON file; `load_corpus` of the result is identical."""
    data = {
        "documents": [
            {
                "doc_id": doc.doc_id,
                "topic_id": doc.topic_id,
                "subtopic_id": doc.subtopic_id,
                "tokens": [
                    {"sentence": t.sentence_index, "text": t.text}
                    for t in doc.tokens
                ],
            }
            for doc in corpus.documents.values()
        ],
        "mentions": [mention_to_json(m) for m in corpus.gold_mentions],
        "clusters": [sorted(c) for c in corpus.gold_partition.clusters],
        "split": corpus.split,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2)
        fh.write("\n")
