"""Measurement harness: build segments, time query sets, summarize trials."""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import asdict, dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from scipy import stats as _stats

from .config import PoolConfig
from .policy import SpPolicy
from .query import top_k_conjunctive, traverse_all
from .segment import Document, Segment

CI_METHOD = "student-t, 95%, trials-1 degrees of freedom"


def split_half(docs: Sequence[Document]) -> tuple[Sequence[Document], Sequence[Document]]:
    """Chronological halves; the first half gets ``floor(n / 2)`` documents."""
    mid = len(docs) // 2
    return docs[:mid], docs[mid:]


def history_from(docs: Iterable[Document], config: PoolConfig) -> dict[str, int]:
    seg = Segment(config)
    seg.ingest_all(docs)
    return seg.export_term_stats()


def build_segment(docs: Iterable[Document], config: PoolConfig,
                  policy: SpPolicy = SpPolicy.DEFAULT,
                  history: Optional[Mapping[str, int]] = None,
                  strict_positions: bool = False) -> Segment:
    seg = Segment(config, policy, history, strict_positions=strict_positions)
    seg.ingest_all(docs)
    return seg


def mean_ci95(values: Sequence[float]) -> tuple[float, float]:
    """Mean and Student-t 95% half-width; the half-width is NaN for one value."""
    n = len(values)
    if n == 0:
        return math.nan, math.nan
    mean = statistics.fmean(values)
    if n < 2:
        return mean, math.nan
    sd = statistics.stdev(values)
    return mean, float(_stats.t.ppf(0.975, n - 1)) * sd / math.sqrt(n)


def _percentile(values: Sequence[float], q: float) -> float:
    if not values:
        return math.nan
    ordered = sorted(values)
    idx = min(len(ordered) - 1, max(0, math.ceil(q * len(ordered)) - 1))
    return ordered[idx]


@dataclass
class ResultRow:
    config: str
    sp_policy: str
    memory_slots: int
    ct_mean_ms: float
    ct_ci95_ms: float
    rk_mean_ms: float
    rk_ci95_ms: float
    ct_p95_ms: float
    rk_p95_ms: float
    postings_read: int
    pointer_follows: int
    queries: int
    trials: int
    k: int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class QueryRun:
    segment: Segment
    trials: int
    k: int
    ct_trial_ms: list[float] = field(default_factory=list)
    rk_trial_ms: list[float] = field(default_factory=list)
    ct_query_ms: list[float] = field(default_factory=list)
    rk_query_ms: list[float] = field(default_factory=list)
    postings_read: int = 0
    pointer_follows: int = 0
    results: list[list[int]] = field(default_factory=list)

    def row(self) -> ResultRow:
        ct_mean, ct_ci = mean_ci95(self.ct_trial_ms)
        rk_mean, rk_ci = mean_ci95(self.rk_trial_ms)
        return ResultRow(
            config=self.segment.config.label,
            sp_policy=self.segment.policy.value,
            memory_slots=self.segment.segment_memory_slots(),
            ct_mean_ms=ct_mean, ct_ci95_ms=ct_ci,
            rk_mean_ms=rk_mean, rk_ci95_ms=rk_ci,
            ct_p95_ms=_percentile(self.ct_query_ms, 0.95),
            rk_p95_ms=_percentile(self.rk_query_ms, 0.95),
            postings_read=self.postings_read,
            pointer_follows=self.pointer_follows,
            queries=len(self.results),
            trials=self.trials,
            k=self.k,
        )


class NondeterministicResult(RuntimeError):
    pass


def run_queries(segment: Segment, queries: Sequence[Sequence[str]], trials: int = 3,
                k: int = 100) -> QueryRun:
    """Time full traversal and top-k retrieval of every query, ``trials`` times.

    Counts and result lists must come out identical in every trial.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if k < 1:
        raise ValueError("k must be >= 1")
    run = QueryRun(segment, trials, k)
    clock = time.perf_counter_ns
    for trial in range(trials):
        read = follows = 0
        results = []
        ct_total = rk_total = 0.0
        for terms in queries:
            t0 = clock()
            report = traverse_all(segment, terms)
            t1 = clock()
            docs = top_k_conjunctive(segment, terms, k)
            t2 = clock()
            ct, rk = (t1 - t0) / 1e6, (t2 - t1) / 1e6
            run.ct_query_ms.append(ct)
            run.rk_query_ms.append(rk)
            ct_total += ct
            rk_total += rk
            read += report.postings_read
            follows += report.pointer_follows
            results.append(docs)
        n = max(1, len(queries))
        run.ct_trial_ms.append(ct_total / n)
        run.rk_trial_ms.append(rk_total / n)
        if trial == 0:
            run.postings_read, run.pointer_follows, run.results = read, follows, results
        elif (read, follows, results) != (run.postings_read, run.pointer_follows, run.results):
            raise NondeterministicResult(f"trial {trial} disagrees with trial 0")
    return run
