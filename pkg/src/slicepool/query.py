"""Query evaluation over a segment: full traversal and top-k conjunction."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

from .segment import Segment


@dataclass
class TraversalReport:
    postings_read: int = 0
    pointer_follows: int = 0
    wall_time: float = 0.0  # seconds


def traverse_all(segment: Segment, terms: Sequence[str]) -> TraversalReport:
    """Read every posting of every query term, end to end."""
    start = time.perf_counter()
    read = follows = 0
    for term in terms:
        it = segment.open_iterator(term)
        read += it.drain()
        follows += it.pointer_follows
    return TraversalReport(read, follows, time.perf_counter() - start)


def top_k_conjunctive(segment: Segment, terms: Sequence[str], k: int) -> list[int]:
    """The ``k`` most recent doc ids containing every term, newest first.

    All iterators walk backwards in time. The iterator furthest ahead (highest
    doc id) is pushed back to the current candidate until every iterator sits
    on the same document.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    unique = list(dict.fromkeys(terms))
    if not unique:
        return []
    iterators = []
    for term in unique:
        if term not in segment.dictionary:
            return []
        iterators.append(segment.open_iterator(term))

    heads = []
    for it in iterators:
        doc = it.next_doc_at_most(segment.doc_count)
        if doc is None:
            return []
        heads.append(doc)

    results: list[int] = []
    n = len(iterators)
    while True:
        candidate = min(heads)
        matched = True
        for i in range(n):
            if heads[i] > candidate:
                doc = iterators[i].next_doc_at_most(candidate)
                if doc is None:
                    return results
                heads[i] = doc
                if doc < candidate:
                    matched = False
                    break
        if not matched:
            continue
        results.append(candidate)
        if len(results) >= k or candidate == 0:
            return results
        for i in range(n):
            doc = iterators[i].next_doc_at_most(candidate - 1)
            if doc is None:
                return results
            heads[i] = doc
