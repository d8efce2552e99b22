"""Seeded synthetic corpora and query sets with Zipf-distributed terms."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .segment import Document


def sample_zipf_ranks(rng: np.random.Generator, vocab: int, alpha: float, n: int) -> np.ndarray:
    """``n`` ranks in ``[1, vocab]`` with probability proportional to ``r**-alpha``."""
    weights = np.arange(1, vocab + 1, dtype=np.float64) ** -alpha
    cdf = np.cumsum(weights)
    cdf /= cdf[-1]
    idx = np.searchsorted(cdf, rng.random(n), side="right")
    return np.minimum(idx, vocab - 1) + 1


def term_name(rank: int) -> str:
    return f"t{rank}"


@dataclass
class SyntheticSpec:
    docs: int = 10_000
    vocab: int = 500
    alpha: float = 1.0
    min_len: int = 4
    max_len: int = 24
    queries: int = 100
    query_min_len: int = 1
    query_max_len: int = 4
    query_bias: float = 1.0  # rank exponent of the query-term draw
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.min_len <= self.max_len:
            raise ValueError("need 0 <= min_len <= max_len")
        if not 1 <= self.query_min_len <= self.query_max_len:
            raise ValueError("need 1 <= query_min_len <= query_max_len")


@dataclass
class SyntheticData:
    documents: list[Document]
    queries: list[list[str]]
    term_frequencies: Counter

    def query_histogram(self) -> dict[int, int]:
        """Postings lengths of the query terms, as ``length -> occurrences``."""
        hist: Counter = Counter()
        for q in self.queries:
            for term in q:
                f = self.term_frequencies.get(term, 0)
                if f:
                    hist[f] += 1
        return dict(sorted(hist.items()))


def generate(spec: SyntheticSpec) -> SyntheticData:
    rng = np.random.default_rng(spec.seed)
    lengths = rng.integers(spec.min_len, spec.max_len + 1, size=spec.docs)
    ranks = sample_zipf_ranks(rng, spec.vocab, spec.alpha, int(lengths.sum())).tolist()
    docs = []
    freqs: Counter = Counter()
    pos = 0
    for i, n in enumerate(lengths.tolist()):
        words = [term_name(r) for r in ranks[pos:pos + n]]
        pos += n
        freqs.update(words)
        docs.append(Document(f"d{i}", " ".join(words)))

    q_lengths = rng.integers(spec.query_min_len, spec.query_max_len + 1, size=spec.queries)
    q_ranks = sample_zipf_ranks(rng, spec.vocab, spec.query_bias, int(q_lengths.sum())).tolist()
    queries = []
    pos = 0
    for n in q_lengths.tolist():
        queries.append([term_name(r) for r in q_ranks[pos:pos + n]])
        pos += n
    return SyntheticData(docs, queries, freqs)
