"""Coreference metrics over (key, response) partition pairs.

All metrics natively handle twinless mentions, i.e. mentions present on one
side only: they are never deleted beforehand and simply earn no overlap
credit. Scores are percentages in [0, 100] kept at full float precision;
rounding to one decimal happens only when a report is rendered.

A 0/0 ratio is defined as 0 throughout, so degenerate inputs (empty
partitions, no non-singleton clusters) yield all-zero rows rather than
errors.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .corpus import Mention, Partition, filter_singletons

SINGLETON_POLICIES = ("included", "omitted")


@dataclass(frozen=True)
class PRF:
    """Recall / precision / F1 triple on the percentage scale."""

    recall: float
    precision: float
    f1: float

    @classmethod
    def from_counts(cls, r_num, r_den, p_num, p_den) -> "PRF":
        recall = 100.0 * r_num / r_den if r_den else 0.0
        precision = 100.0 * p_num / p_den if p_den else 0.0
        f1 = (
            2.0 * recall * precision / (recall + precision)
            if recall + precision
            else 0.0
        )
        return cls(recall, precision, f1)


def _muc_side(a: Partition, b: Partition) -> tuple[int, int]:
    # numerator: links of each a-cluster still recoverable after b partitions
    # it; twinless members each form their own block
    num = den = 0
    for cluster in a.clusters:
        blocks = set()
        twinless = 0
        for m in cluster:
            i = b.mention_index.get(m)
            if i is None:
                twinless += 1
            else:
                blocks.add(i)
        num += len(cluster) - (len(blocks) + twinless)
        den += len(cluster) - 1
    return num, den


def muc(key: Partition, response: Partition) -> PRF:
    """Link-based metric: fraction of coreference links preserved.

    Singleton clusters carry no links, so they contribute nothing to either
    side; the score is invariant under singleton filtering.
    """
    r_num, r_den = _muc_side(key, response)
    p_num, p_den = _muc_side(response, key)
    return PRF.from_counts(r_num, r_den, p_num, p_den)


def _b_cubed_side(a: Partition, b: Partition) -> tuple[float, int]:
    num = 0.0
    total = 0
    for cluster in a.clusters:
        total += len(cluster)
        counts = Counter(
            b.mention_index[m] for m in cluster if m in b.mention_index
        )
        num += sum(c * c for c in counts.values()) / len(cluster)
    return num, total


def b_cubed(key: Partition, response: Partition) -> PRF:
    """Mention-based metric: per-mention overlap of its two clusters.

    Recall averages |k intersect r| / |k| over key mentions; precision is the
    mirror image. A mention absent from the other side contributes 0.
    """
    r_num, r_den = _b_cubed_side(key, response)
    p_num, p_den = _b_cubed_side(response, key)
    return PRF.from_counts(r_num, r_den, p_num, p_den)


def optimal_alignment(similarity) -> list[tuple[int, int]]:
    """Maximum-total-similarity one-to-one matching of rows to columns.

    Entries must be finite and non-negative. Rectangular inputs are fine:
    the smaller side is matched completely, which equals padding with zero
    rows or columns. Returns (row, column) index pairs.
    """
    matrix = np.asarray(similarity, dtype=float)
    if matrix.size == 0:
        return []
    if matrix.ndim != 2:
        raise ValueError("similarity must be a 2-d matrix")
    if not np.isfinite(matrix).all() or (matrix < 0).any():
        raise ValueError("similarity entries must be finite and non-negative")
    rows, cols = linear_sum_assignment(matrix, maximize=True)
    return list(zip(rows.tolist(), cols.tolist()))


def ceaf_e(key: Partition, response: Partition) -> PRF:
    """Entity-based metric: optimal one-to-one cluster alignment.

    Cluster similarity is 2|k intersect r| / (|k| + |r|); the total over the
    best alignment is normalized by the key (recall) and response (precision)
    cluster counts. Empty key or response yields zeros.
    """
    if not key.clusters or not response.clusters:
        return PRF.from_counts(0, 0, 0, 0)
    sim = np.zeros((len(key.clusters), len(response.clusters)))
    for i, k in enumerate(key.clusters):
        for j, r in enumerate(response.clusters):
            inter = len(k & r)
            if inter:
                sim[i, j] = 2.0 * inter / (len(k) + len(r))
    total = float(sum(sim[i, j] for i, j in optimal_alignment(sim)))
    return PRF.from_counts(total, len(key.clusters), total, len(response.clusters))


def _lea_side(a: Partition, b: Partition) -> tuple[float, int]:
    num = 0.0
    den = 0
    for cluster in a.clusters:
        size = len(cluster)
        den += size
        if size == 1:
            # self-link credit only if the mention is a singleton on both sides
            (m,) = cluster
            other = b.cluster_of(m)
            resolution = 1.0 if other is not None and len(other) == 1 else 0.0
        else:
            counts = Counter(
                b.mention_index[m] for m in cluster if m in b.mention_index
            )
            hit = sum(c * (c - 1) // 2 for c in counts.values())
            resolution = hit / (size * (size - 1) // 2)
        num += size * resolution
    return num, den


def lea(key: Partition, response: Partition) -> PRF:
    """Link-based metric weighting each cluster by its size.

    A cluster's resolution is the fraction of its links found in the other
    partition; singleton clusters score via a self-link that counts only
    when the mention is reproduced as a singleton.
    """
    r_num, r_den = _lea_side(key, response)
    p_num, p_den = _lea_side(response, key)
    return PRF.from_counts(r_num, r_den, p_num, p_den)


def conll_f1(muc_f1: float, b_cubed_f1: float, ceaf_e_f1: float) -> float:
    """Unweighted mean of the MUC, B3 and CEAFe F1 scores."""
    return (muc_f1 + b_cubed_f1 + ceaf_e_f1) / 3.0


def mention_detection_prf(key_mentions: Iterable, response_mentions: Iterable) -> PRF:
    """Exact-boundary mention detection score.

    Accepts Mention objects (matched on (doc_id, start_token, end_token)) or
    pre-computed hashable identities.
    """

    def ident(m):
        return m.span() if isinstance(m, Mention) else m

    key = {ident(m) for m in key_mentions}
    response = {ident(m) for m in response_mentions}
    hits = len(key & response)
    return PRF.from_counts(hits, len(key), hits, len(response))


@dataclass(frozen=True)
class MetricReport:
    """One evaluation row: the four metrics plus their CoNLL summary."""

    muc: PRF
    b_cubed: PRF
    ceaf_e: PRF
    lea: PRF
    conll_f1: float
    singleton_policy: str

    def to_dict(self) -> dict:
        def prf(p: PRF) -> dict:
            return {"recall": p.recall, "precision": p.precision, "f1": p.f1}

        return {
            "muc": prf(self.muc),
            "b_cubed": prf(self.b_cubed),
            "ceaf_e": prf(self.ceaf_e),
            "lea": prf(self.lea),
            "conll_f1": self.conll_f1,
            "singleton_policy": self.singleton_policy,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        """Aligned single-row table: R, P, F1 per metric plus CoNLL F1."""
        label = f"singletons {self.singleton_policy}"
        groups = [
            ("MUC", self.muc),
            ("B3", self.b_cubed),
            ("CEAFe", self.ceaf_e),
            ("LEA", self.lea),
        ]
        width = max(len(label), 20)
        head1 = "".ljust(width)
        head2 = "".ljust(width)
        row = label.ljust(width)
        for name, prf in groups:
            head1 += name.ljust(24)
            head2 += "".join(c.ljust(8) for c in ("R", "P", "F1"))
            row += "".join(
                f"{v:.1f}".ljust(8) for v in (prf.recall, prf.precision, prf.f1)
            )
        head1 += "CoNLL"
        head2 += "F1"
        row += f"{self.conll_f1:.1f}"
        return "\n".join((head1, head2, row))


def evaluate(
    key: Partition, response: Partition, singleton_policy: str = "included"
) -> MetricReport:
    """Score a response partition against a key partition.

    With `singleton_policy="omitted"`, size-1 clusters are removed from both
    partitions before any metric sees them; `"included"` scores them as-is.
    """
    if singleton_policy not in SINGLETON_POLICIES:
        raise ValueError(
            f"unknown singleton policy {singleton_policy!r}; "
            f"expected one of {SINGLETON_POLICIES}"
        )
    if singleton_policy == "omitted":
        key = filter_singletons(key)
        response = filter_singletons(response)
    m = muc(key, response)
    b = b_cubed(key, response)
    c = ceaf_e(key, response)
    return MetricReport(
        muc=m,
        b_cubed=b,
        ceaf_e=c,
        lea=lea(key, response),
        conll_f1=conll_f1(m.f1, b.f1, c.f1),
        singleton_policy=singleton_policy,
    )
