"""Analytical memory and time costs of a pool configuration.

The threshold ``theta_i`` is the posting capacity of a term's first ``i + 1``
slices. A term with ``f`` postings and ``theta_{i-1} < f <= theta_i`` owns
``i + 1`` slices, follows ``i`` pointers on a full traversal and occupies
``theta_i + i`` slots (one extra slot when its chain starts past pool 0, for
the NULL pointer slot of the starting slice).

Memory cost under a Zipf law can be summed rank by rank, bucketed by
threshold interval (exact, O(#buckets)), or approximated with the continuous
rank bounds ``beta * theta ** (-1/alpha)``.
"""

from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .config import PoolConfig
from .errors import ConfigurationError
from .synth import sample_zipf_ranks

# Guards floor() against products like 5.999999999999999 that are exact in
# real arithmetic.
_FLOOR_EPS = 1e-9


class ThresholdTable:
    """Thresholds for one configuration and starting pool; `theta_at` covers any index."""

    def __init__(self, config: PoolConfig, start_pool: int = 0):
        if not 0 <= start_pool < config.pool_count:
            raise ConfigurationError(f"no pool {start_pool} in {config}")
        self.config = config
        self.start_pool = start_pool
        sizes = config.slice_sizes
        last = config.pool_count - 1
        # slots carrying pointers (followable or NULL) for a chain of i+1 slices
        self.pointer_slots = 0 if start_pool == 0 else 1
        caps = [sizes[start_pool] - self.pointer_slots]
        pool = start_pool
        while pool < last:
            pool += 1
            caps.append(sizes[pool] - 1)
        self.head = list(itertools.accumulate(caps))
        self.step = sizes[last] - 1

    def interval(self, f: int) -> int:
        """The ``i`` with ``theta_{i-1} < f <= theta_i`` (0 when ``f <= theta_0``)."""
        if f < 1:
            raise ValueError(f"frequency must be >= 1, got {f}")
        head = self.head
        if f <= head[-1]:
            return bisect.bisect_left(head, f)
        if self.step == 0:
            raise ConfigurationError(f"{self.config} cannot grow past {head[-1]} postings")
        return len(head) - 1 + -(-(f - head[-1]) // self.step)

    def theta_at(self, i: int) -> int:
        if i < len(self.head):
            return self.head[i]
        return self.head[-1] + (i - len(self.head) + 1) * self.step

    def slots_for_interval(self, i: int) -> int:
        return self.theta_at(i) + i + self.pointer_slots

    def slots_required(self, f: int) -> int:
        return self.slots_for_interval(self.interval(f))

    def pointer_count(self, f: int) -> int:
        return self.interval(f)

    # vectorized counterparts, used by the configuration sweep

    def intervals(self, freqs: np.ndarray) -> np.ndarray:
        freqs = np.asarray(freqs, dtype=np.int64)
        if freqs.size and freqs.min() < 1:
            raise ValueError("frequencies must be >= 1")
        head = np.asarray(self.head, dtype=np.int64)
        idx = np.searchsorted(head, freqs, side="left")
        beyond = freqs > head[-1]
        if beyond.any():
            if self.step == 0:
                raise ConfigurationError(f"{self.config} cannot grow past {self.head[-1]}")
            extra = -(-(freqs[beyond] - head[-1]) // self.step)
            idx[beyond] = len(head) - 1 + extra
        return idx

    def slots_array(self, freqs: np.ndarray) -> np.ndarray:
        i = self.intervals(freqs)
        head = np.asarray(self.head, dtype=np.int64)
        k0 = len(head) - 1
        theta = np.where(i <= k0, head[np.minimum(i, k0)], head[-1] + (i - k0) * self.step)
        return theta + i + self.pointer_slots


@lru_cache(maxsize=512)
def threshold_table(config: PoolConfig, start_pool: int = 0) -> ThresholdTable:
    return ThresholdTable(config, start_pool)


def thresholds(config: PoolConfig, count: int, start_pool: int = 0) -> list[int]:
    table = threshold_table(config, start_pool)
    return [table.theta_at(i) for i in range(count)]


def slots_required(f: int, config: PoolConfig, start_pool: int = 0) -> int:
    return threshold_table(config, start_pool).slots_required(f)


def pointer_count(f: int, config: PoolConfig, start_pool: int = 0) -> int:
    return threshold_table(config, start_pool).pointer_count(f)


def memory_cost_direct(config: PoolConfig, frequencies: Iterable[int],
                       start_pools: Optional[Iterable[int]] = None) -> int:
    """Sum of per-term slot counts; ``start_pools`` pairs with ``frequencies``."""
    if start_pools is None:
        table = threshold_table(config, 0)
        return sum(table.slots_required(f) for f in frequencies)
    return sum(slots_required(f, config, s) for f, s in zip(frequencies, start_pools, strict=True))


def memory_cost_histogram(config: PoolConfig, histogram: Mapping[int, int],
                          start_pool: int = 0) -> int:
    if not histogram:
        return 0
    freqs = np.fromiter(histogram.keys(), dtype=np.int64, count=len(histogram))
    counts = np.fromiter(histogram.values(), dtype=np.int64, count=len(histogram))
    slots = threshold_table(config, start_pool).slots_array(freqs)
    return int((slots * counts).sum())


def time_cost(config: PoolConfig, query_term_frequencies: Iterable[int],
              start_pool: int = 0) -> int:
    """Pointer follows, in units of one pointer dereference."""
    table = threshold_table(config, start_pool)
    return sum(table.pointer_count(f) for f in query_term_frequencies)


def time_cost_histogram(config: PoolConfig, histogram: Mapping[int, int],
                        start_pool: int = 0) -> int:
    if not histogram:
        return 0
    freqs = np.fromiter(histogram.keys(), dtype=np.int64, count=len(histogram))
    counts = np.fromiter(histogram.values(), dtype=np.int64, count=len(histogram))
    return int((threshold_table(config, start_pool).intervals(freqs) * counts).sum())


# Zipf-distributed collections

def generalized_harmonic(n: int, alpha: float, chunk: int = 1 << 20) -> float:
    """``sum_{x=1..n} x**-alpha`` with compensated summation."""
    parts = (np.arange(lo, min(lo + chunk, n + 1), dtype=np.float64) ** -alpha
             for lo in range(1, n + 1, chunk))
    return math.fsum(itertools.chain.from_iterable(parts))


@dataclass(frozen=True)
class ZipfParams:
    alpha: float
    vocab: int
    total_terms: float

    def __post_init__(self):
        if self.alpha <= 0:
            raise ValueError("alpha must be positive")
        if self.vocab < 1:
            raise ValueError("vocabulary must hold at least one term")
        if self.total_terms <= 0:
            raise ValueError("total_terms must be positive")

    @cached_property
    def harmonic(self) -> float:
        return generalized_harmonic(self.vocab, self.alpha)

    @cached_property
    def beta(self) -> float:
        return (self.harmonic / self.total_terms) ** (-1.0 / self.alpha)

    def frequency(self, rank: int) -> float:
        if not 1 <= rank <= self.vocab:
            raise ValueError(f"rank {rank} outside [1, {self.vocab}]")
        return self.total_terms * rank ** -self.alpha / self.harmonic

    def term_frequency(self, rank: int) -> int:
        """Integral frequency of a rank: floored, and at least one."""
        return max(1, math.floor(self.frequency(rank) + _FLOOR_EPS))

    def last_rank_at_least(self, c: int) -> int:
        """Largest rank whose integral frequency is ``>= c`` (0 if none)."""
        v = self.vocab
        if c <= 1:
            return v
        est = self.beta * c ** (-1.0 / self.alpha)
        r = 0 if est < 1 else min(v, int(est))
        f = self.term_frequency
        while r < v and f(r + 1) >= c:
            r += 1
        while r > 0 and f(r) < c:
            r -= 1
        return r

    def frequency_histogram(self) -> dict[int, int]:
        """Number of ranks per integral frequency, in O(#distinct frequencies)."""
        hist: dict[int, int] = {}
        r = 1
        while r <= self.vocab:
            c = self.term_frequency(r)
            end = self.last_rank_at_least(c)
            hist[c] = hist.get(c, 0) + end - r + 1
            r = end + 1
        return hist


def zipf_frequency(rank: int, params: ZipfParams) -> float:
    return params.frequency(rank)


def memory_cost_zipf_direct(config: PoolConfig, params: ZipfParams,
                            start_pool: int = 0) -> int:
    """Rank-by-rank sum of slot counts. O(|V|); the reference for the fast paths."""
    table = threshold_table(config, start_pool)
    f = params.term_frequency
    return sum(table.slots_required(f(r)) for r in range(1, params.vocab + 1))


def memory_cost_closed_bucketed(config: PoolConfig, params: ZipfParams,
                                start_pool: int = 0) -> int:
    """Exact memory cost, one term per threshold bucket instead of per rank.

    Ranks whose integral frequency lies in ``(theta_{k-1}, theta_k]`` are those
    between ``last_rank_at_least(theta_k + 1)`` (exclusive) and
    ``last_rank_at_least(theta_{k-1} + 1)`` (inclusive).
    """
    table = threshold_table(config, start_pool)
    bound = params.last_rank_at_least
    upper = bound(table.theta_at(0) + 1)
    total = (params.vocab - upper) * table.slots_for_interval(0)
    k = 1
    while upper > 0:
        lower = bound(table.theta_at(k) + 1)
        total += (upper - lower) * table.slots_for_interval(k)
        upper = lower
        k += 1
    return total


def memory_cost_closed_continuous(config: PoolConfig, params: ZipfParams) -> float:
    """Continuous-rank closed form, real valued.

    Rank ``r`` is given the unit interval ``[r, r + 1)``, so bounds are clamped
    to ``[1, |V| + 1]`` and the bucket masses add up to ``|V|``.
    """
    table = threshold_table(config, 0)
    v = params.vocab
    inv = -1.0 / params.alpha
    beta = params.beta
    fmax = params.frequency(1)

    def rank_bound(theta):
        return min(max(beta * theta ** inv, 1.0), v + 1.0)

    theta0 = table.theta_at(0)
    upper = rank_bound(theta0)
    total = (v - upper + 1) * theta0
    k = 1
    while table.theta_at(k - 1) < fmax:
        lower = rank_bound(table.theta_at(k))
        if upper > lower:
            total += (upper - lower) * (table.theta_at(k) + k)
        upper = lower
        k += 1
    return total


# configuration sweep

@dataclass
class SweepPoint:
    config: PoolConfig
    memory_cost: int
    time_cost: int
    selected: bool = field(default=False, compare=False)


def enumerate_configurations(exponents: Sequence[int] = range(0, 13),
                             pool_counts: Sequence[int] = range(4, 9)):
    exps = sorted(set(exponents))
    for p in pool_counts:
        for combo in itertools.combinations(exps, p):
            yield PoolConfig(combo)


def sweep_configurations(memory_histogram: Mapping[int, int],
                         query_histogram: Mapping[int, int],
                         exponents: Sequence[int] = range(0, 13),
                         pool_counts: Sequence[int] = range(4, 9)) -> list[SweepPoint]:
    """Memory and time cost of every strictly increasing exponent tuple.

    ``memory_histogram`` maps term frequency to number of terms (for a Zipf
    collection use ``ZipfParams.frequency_histogram``); ``query_histogram``
    maps the postings length of a query term to its number of occurrences.
    """
    mf = np.fromiter(memory_histogram.keys(), dtype=np.int64, count=len(memory_histogram))
    mc = np.fromiter(memory_histogram.values(), dtype=np.int64, count=len(memory_histogram))
    qf = np.fromiter(query_histogram.keys(), dtype=np.int64, count=len(query_histogram))
    qc = np.fromiter(query_histogram.values(), dtype=np.int64, count=len(query_histogram))
    points = []
    for config in enumerate_configurations(exponents, pool_counts):
        table = ThresholdTable(config, 0)
        memory = int((table.slots_array(mf) * mc).sum()) if mf.size else 0
        time = int((table.intervals(qf) * qc).sum()) if qf.size else 0
        points.append(SweepPoint(config, memory, time))
    return points


def pareto_bucket_select(points: Sequence[SweepPoint], n_buckets: int = 50) -> list[SweepPoint]:
    """Split the memory range into equal-width buckets; keep each bucket's fastest point.

    Ties go to the smaller memory cost, then the lexicographically smaller
    exponent tuple. Empty buckets are skipped.
    """
    if n_buckets < 1:
        raise ValueError("n_buckets must be >= 1")
    if not points:
        return []
    lo = min(p.memory_cost for p in points)
    hi = max(p.memory_cost for p in points)
    width = (hi - lo) / n_buckets
    best: dict[int, SweepPoint] = {}
    for p in points:
        b = 0 if width == 0 else min(int((p.memory_cost - lo) / width), n_buckets - 1)
        key = (p.time_cost, p.memory_cost, p.config.exponents)
        cur = best.get(b)
        if cur is None or key < (cur.time_cost, cur.memory_cost, cur.config.exponents):
            best[b] = p
    return [best[b] for b in sorted(best)]


def query_histogram_from_zipf(params: ZipfParams, n_terms: int, seed: int = 0,
                              bias: Optional[float] = None) -> dict[int, int]:
    """Draw query-term ranks from a Zipf law and tally their postings lengths.

    ``bias`` is the rank exponent of the query draw; it defaults to the
    collection's own exponent, so frequent terms are queried proportionally.
    """
    rng = np.random.default_rng(seed)
    exponent = params.alpha if bias is None else bias
    ranks = sample_zipf_ranks(rng, params.vocab, exponent, n_terms)
    hist: dict[int, int] = {}
    for r in ranks.tolist():
        f = params.term_frequency(r)
        hist[f] = hist.get(f, 0) + 1
    return hist

