"""Shared fixtures: the worked-example corpus, two response systems, and
small synthetic corpora for pipeline and topic tests."""

from __future__ import annotations

import json

import pytest

from cdcoref import Partition, load_corpus

# verdict lines recorded by the acceptance checks; echoed after the run
ACCEPTANCE_VERDICTS: list = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_VERDICTS:
        terminalreporter.section("acceptance checks")
        for line in ACCEPTANCE_VERDICTS:
            terminalreporter.write_line(line)

# Worked example used throughout: a 10-mention gold set with five singletons,
# one response that over-merges into a single big cluster but keeps the
# singletons (span_system), and one that finds good links but misses all
# singletons and adds a spurious mention Z (link_system).
GOLD_CLUSTERS = [
    ["A"], ["B"], ["C"], ["D"], ["E"], ["F", "G"], ["H", "I", "J"],
]
SPAN_SYSTEM_CLUSTERS = [
    ["A"], ["B"], ["C"], ["D"], ["E", "F", "G", "H", "I", "J"],
]
LINK_SYSTEM_CLUSTERS = [
    ["E", "F", "G"], ["H", "I", "J"], ["Z"],
]

_D1_TEXT = "the board met after the ceo resigned and fired the deputy fast"
_D2_TEXT = "firing confirmed as three staff quit over the dispute"

_EXAMPLE_MENTIONS = [
    # (id, doc, start, end, head_lemma, score)
    ("A", "d1", 1, 1, "board", 1.5),
    ("B", "d1", 2, 2, "meet", None),
    ("C", "d1", 5, 5, "ceo", None),
    ("D", "d1", 6, 6, "resign", None),
    ("E", "d1", 10, 10, "deputy", None),
    ("F", "d1", 8, 8, "fire", 0.25),
    ("G", "d2", 0, 0, "Fire", None),
    ("H", "d2", 1, 1, "quit", None),
    ("I", "d2", 5, 5, "quit", None),
    ("J", "d2", 8, 8, "QUIT", None),
]
_Z_MENTION = ("Z", "d2", 3, 4, "staff", None)


def _mention_obj(row):
    mid, doc, start, end, lemma, score = row
    obj = {
        "mention_id": mid,
        "doc_id": doc,
        "start_token": start,
        "end_token": end,
        "type": "event",
        "head_lemma": lemma,
    }
    if score is not None:
        obj["score"] = score
    return obj


def example_corpus_data() -> dict:
    def tokens(text, split_at=None):
        words = text.split()
        return [
            {"sentence": 0 if split_at is None or i < split_at else 1, "text": w}
            for i, w in enumerate(words)
        ]

    return {
        "documents": [
            {
                "doc_id": "d1",
                "topic_id": "t1",
                "subtopic_id": "t1a",
                "tokens": tokens(_D1_TEXT, split_at=7),
            },
            {
                "doc_id": "d2",
                "topic_id": "t1",
                "subtopic_id": "t1b",
                "tokens": tokens(_D2_TEXT),
            },
        ],
        "mentions": [_mention_obj(m) for m in _EXAMPLE_MENTIONS],
        # singletons A..E are left unlisted on purpose: the loader wraps them
        "clusters": [["F", "G"], ["H", "I", "J"]],
    }


def span_system_data(with_mentions: bool) -> dict:
    data = {"clusters": SPAN_SYSTEM_CLUSTERS}
    if with_mentions:
        data = {
            "mentions": [_mention_obj(m) for m in _EXAMPLE_MENTIONS],
            **data,
        }
    return data


def link_system_data(with_mentions: bool) -> dict:
    data = {"clusters": LINK_SYSTEM_CLUSTERS}
    if with_mentions:
        used = [m for m in _EXAMPLE_MENTIONS if m[0] in "EFGHIJ"]
        data = {
            "mentions": [_mention_obj(m) for m in used + [_Z_MENTION]],
            **data,
        }
    return data


def gold_system_data(with_mentions: bool) -> dict:
    data = {"clusters": GOLD_CLUSTERS}
    if with_mentions:
        data = {"mentions": [_mention_obj(m) for m in _EXAMPLE_MENTIONS], **data}
    return data


def toy_corpus_data() -> dict:
    """Three documents, two topics. Every "strike" event shares one head
    lemma, so lemma-based clustering is exact inside subtopics, merges the
    two subtopics of T1 at topic level, and pulls in the unrelated T2
    strikes when the whole corpus is one unit. Documents a1/a2 share enough
    n-grams to look similar to tf*idf; b1 shares none of their weight."""

    def doc(doc_id, topic, subtopic, text):
        return {
            "doc_id": doc_id,
            "topic_id": topic,
            "subtopic_id": subtopic,
            "tokens": [{"sentence": 0, "text": w} for w in text.split()],
        }

    def mention(mid, doc_id, pos, mtype, lemma):
        return {
            "mention_id": mid,
            "doc_id": doc_id,
            "start_token": pos,
            "end_token": pos,
            "type": mtype,
            "head_lemma": lemma,
        }

    return {
        "documents": [
            doc("a1", "T1", "s1", "union strike spreads as steel strike halts offer"),
            doc("a2", "T1", "s2", "union strike spreads as steel strike stops work"),
            doc("b1", "T2", "s3", "air strike hits union while second strike looms"),
        ],
        "mentions": [
            mention("e1", "a1", 1, "event", "strike"),
            mention("e2", "a1", 5, "event", "strike"),
            mention("e3", "a1", 7, "event", "offer"),
            mention("e4", "a2", 1, "event", "strike"),
            mention("e5", "a2", 5, "event", "strike"),
            mention("e6", "b1", 1, "event", "strike"),
            mention("e7", "b1", 6, "event", "strike"),
            mention("n1", "a1", 0, "entity", "union"),
            mention("n2", "a2", 0, "entity", "union"),
            mention("n3", "b1", 3, "entity", "union"),
        ],
        "clusters": [
            ["e1", "e2"], ["e4", "e5"], ["e6", "e7"], ["n1", "n2"],
        ],
    }


def topic_corpus_data() -> dict:
    """Ten documents in two vocabulary-disjoint topics of five documents."""
    shared = {
        "TA": ["alpha", "beta", "gamma", "delta", "epsilon", "zeta"],
        "TB": ["omega", "psi", "chi", "phi", "upsilon", "sigma"],
    }
    documents = []
    for topic, words in shared.items():
        for i in range(5):
            rotated = words[i:] + words[:i]
            documents.append(
                {
                    "doc_id": f"{topic.lower()}{i}",
                    "topic_id": topic,
                    "subtopic_id": f"{topic}s",
                    "tokens": [{"sentence": 0, "text": w} for w in rotated],
                }
            )
    return {"documents": documents, "mentions": [], "clusters": []}


def write_json(path, data) -> str:
    path.write_text(json.dumps(data, indent=2), encoding="utf-8")
    return str(path)


@pytest.fixture
def example_partitions():
    return (
        Partition(GOLD_CLUSTERS),
        Partition(SPAN_SYSTEM_CLUSTERS),
        Partition(LINK_SYSTEM_CLUSTERS),
    )


@pytest.fixture
def example_corpus_file(tmp_path):
    return write_json(tmp_path / "example_corpus.json", example_corpus_data())


@pytest.fixture
def example_corpus(example_corpus_file):
    return load_corpus(example_corpus_file)


@pytest.fixture
def toy_corpus_file(tmp_path):
    return write_json(tmp_path / "toy_corpus.json", toy_corpus_data())


@pytest.fixture
def toy_corpus(toy_corpus_file):
    return load_corpus(toy_corpus_file)


@pytest.fixture
def topic_corpus_file(tmp_path):
    return write_json(tmp_path / "topic_corpus.json", topic_corpus_data())


@pytest.fixture
def topic_corpus(topic_corpus_file):
    return load_corpus(topic_corpus_file)
