"""Shared builders, random generators, and independent oracle implementations.

The oracles here deliberately take the slow, obvious route (exhaustive
permutation search, full rescans from raw pair scores) so they share no code
path with the package implementations they check.
"""

from __future__ import annotations

import itertools

import hypothesis.strategies as st

from cdcoref import Partition, ScoreTable


def random_partition(rng, members) -> Partition:
    members = list(members)
    if not members:
        return Partition([])
    labels = [rng.randrange(1, len(members) + 1) for _ in members]
    groups: dict[int, set] = {}
    for m, label in zip(members, labels):
        groups.setdefault(label, set()).add(m)
    return Partition(groups.values())


def random_partition_pair(rng, max_mentions=9) -> tuple[Partition, Partition]:
    """Two random partitions over overlapping (not equal) mention subsets."""
    n = rng.randrange(1, max_mentions + 1)
    universe = [f"m{i}" for i in range(n)]
    key_members = [m for m in universe if rng.random() < 0.85]
    resp_members = [m for m in universe if rng.random() < 0.85]
    return random_partition(rng, key_members), random_partition(rng, resp_members)


def random_same_universe_pair(rng, max_mentions=9) -> tuple[Partition, Partition]:
    n = rng.randrange(1, max_mentions + 1)
    universe = [f"m{i}" for i in range(n)]
    return random_partition(rng, universe), random_partition(rng, universe)


def dyadic_score_table(rng, ids) -> ScoreTable:
    """Random scores on a dyadic grid (k/16), so any summation order is exact
    in float arithmetic and cross-implementation trace comparisons are safe."""
    entries = {}
    for a, b in itertools.combinations(sorted(ids), 2):
        entries[(a, b)] = rng.randrange(-16, 33) / 16
    return ScoreTable(entries)


def exhaustive_alignment_total(matrix) -> float:
    """Best one-to-one assignment total by trying every permutation."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if rows == 0 or cols == 0:
        return 0.0
    best = None
    if rows <= cols:
        for perm in itertools.permutations(range(cols), rows):
            total = sum(matrix[i][perm[i]] for i in range(rows))
            best = total if best is None else max(best, total)
    else:
        for perm in itertools.permutations(range(rows), cols):
            total = sum(matrix[perm[j]][j] for j in range(cols))
            best = total if best is None else max(best, total)
    return best


def brute_force_average_link(ids, score_fn, threshold):
    """Average-link clustering that rescans every cluster pair from the raw
    member scores on every round. Same tie rule, independent arithmetic."""
    clusters = [frozenset([x]) for x in sorted(ids)]
    merges = []
    while len(clusters) > 1:
        best = None
        for a, b in itertools.combinations(clusters, 2):
            total = 0.0
            for x in sorted(a):
                for y in sorted(b):
                    total += score_fn(x, y)
            avg = total / (len(a) * len(b))
            rank = (-avg, tuple(sorted((min(a), min(b)))))
            if best is None or rank < best[0]:
                best = (rank, a, b, avg)
        _, a, b, avg = best
        if avg < threshold:
            break
        clusters.remove(a)
        clusters.remove(b)
        clusters.append(a | b)
        merges.append((a, b, avg))
    return sorted(clusters, key=lambda c: sorted(c)), merges


@st.composite
def partition_pair_strategy(draw, max_mentions=8):
    """Key/response partitions over overlapping subsets of a small universe."""
    n = draw(st.integers(1, max_mentions))
    universe = [f"m{i}" for i in range(n)]

    def side():
        keep = draw(st.lists(st.booleans(), min_size=n, max_size=n))
        members = [m for m, k in zip(universe, keep) if k]
        labels = draw(
            st.lists(st.integers(0, max_mentions), min_size=len(members), max_size=len(members))
        )
        groups: dict[int, set] = {}
        for m, label in zip(members, labels):
            groups.setdefault(label, set()).add(m)
        return Partition(groups.values())

    return side(), side()


@st.composite
def partition_strategy(draw, max_mentions=8):
    n = draw(st.integers(1, max_mentions))
    members = [f"m{i}" for i in range(n)]
    labels = draw(st.lists(st.integers(0, max_mentions), min_size=n, max_size=n))
    groups: dict[int, set] = {}
    for m, label in zip(members, labels):
        groups.setdefault(label, set()).add(m)
    return Partition(groups.values())
