import itertools
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from slicepool.config import PoolConfig, FOUR_POOL_ROWS, MULTI_POOL_ROWS, Z_G
from slicepool.cost_model import (
    SweepPoint, ThresholdTable, ZipfParams, enumerate_configurations, generalized_harmonic,
    memory_cost_closed_bucketed, memory_cost_closed_continuous, memory_cost_direct,
    memory_cost_histogram, memory_cost_zipf_direct, pareto_bucket_select, pointer_count,
    query_histogram_from_zipf, slots_required, sweep_configurations, thresholds, time_cost,
    time_cost_histogram, zipf_frequency,
)
from slicepool.errors import ConfigurationError

exponent_tuples = st.lists(st.integers(0, 12), min_size=1, max_size=8, unique=True).map(
    lambda xs: PoolConfig(tuple(sorted(xs)))).filter(lambda c: c.exponents != (0,))


def recurrence_oracle(config, count):
    """Thresholds straight from the recurrence, repeating the last exponent."""
    z = config.exponents
    out = [2 ** z[0]]
    for i in range(1, count):
        out.append(out[-1] + 2 ** z[min(i, len(z) - 1)] - 1)
    return out


def step_oracle(f, config, start_pool=0):
    """Slots and pointers by walking slice capacities one slice at a time."""
    sizes = config.slice_sizes
    pool = start_pool
    cap = sizes[pool] - (1 if start_pool else 0)
    slots, pointers = sizes[pool], 0
    while cap < f:
        pool = min(pool + 1, len(sizes) - 1)
        cap += sizes[pool] - 1
        slots += sizes[pool]
        pointers += 1
    return slots, pointers


def test_production_thresholds():
    assert thresholds(Z_G, 6) == [2, 17, 144, 2191, 4238, 6285]


@given(exponent_tuples)
def test_thresholds_match_recurrence(config):
    assert thresholds(config, 20) == recurrence_oracle(config, 20)


@given(exponent_tuples, st.integers(1, 10**6), st.integers(0, 7))
def test_slots_and_pointers_match_step_oracle(config, f, s):
    s = min(s, config.pool_count - 1)
    assert (slots_required(f, config, s), pointer_count(f, config, s)) == step_oracle(f, config, s)


@pytest.mark.parametrize("f, slots, pointers", [
    (1, 2, 0), (2, 2, 0), (3, 18, 1), (20, 146, 2), (100, 146, 2),
    (2192, 4242, 4), (3000, 4242, 4),
])
def test_production_examples(f, slots, pointers):
    assert slots_required(f, Z_G) == slots
    assert pointer_count(f, Z_G) == pointers


def test_start_pool_examples():
    # f=16 starting in pool 1: 15 postings fit, the 16th needs a pool-2 slice
    assert slots_required(16, Z_G, 1) == 16 + 128
    assert slots_required(16, Z_G, 0) == 18
    assert slots_required(2047, Z_G, 3) == 2048
    assert pointer_count(2047, Z_G, 3) == 0


def test_frequency_must_be_positive():
    with pytest.raises(ValueError):
        slots_required(0, Z_G)
    with pytest.raises(ConfigurationError):
        slots_required(2, PoolConfig((0,)))
    assert slots_required(1, PoolConfig((0,))) == 1


@given(exponent_tuples, st.lists(st.integers(1, 10**5), max_size=50), st.integers(0, 7))
def test_vectorized_paths_agree(config, freqs, s):
    s = min(s, config.pool_count - 1)
    table = ThresholdTable(config, s)
    arr = np.array(freqs, dtype=np.int64)
    assert table.slots_array(arr).tolist() == [table.slots_required(f) for f in freqs]
    assert table.intervals(arr).tolist() == [table.pointer_count(f) for f in freqs]


def test_direct_memory_cost():
    assert memory_cost_direct(Z_G, [1, 5, 100]) == 166
    assert memory_cost_direct(Z_G, []) == 0
    assert memory_cost_direct(Z_G, [16, 16], [0, 1]) == 18 + 144
    assert memory_cost_histogram(Z_G, {1: 1, 5: 1, 100: 1}) == 166


def test_time_cost():
    assert time_cost(Z_G, [5, 100]) == 3
    assert time_cost(Z_G, [1, 2, 2]) == 0
    assert time_cost(Z_G, [5, 100] * 2) == 6
    assert time_cost_histogram(Z_G, {5: 2, 100: 2}) == 6


def test_harmonic_and_frequency():
    assert generalized_harmonic(3, 1.0) == pytest.approx(11 / 6)
    p = ZipfParams(1.0, 3, 11)
    assert zipf_frequency(1, p) == pytest.approx(6.0)
    assert [p.term_frequency(r) for r in (1, 2, 3)] == [6, 3, 2]
    assert 0 < zipf_frequency(3, p) < zipf_frequency(2, p)
    with pytest.raises(ValueError):
        zipf_frequency(4, p)


def test_full_scale_harmonic():
    p = ZipfParams(1.0, 11_000_000, 76e6)
    # H_n ~ ln n + gamma + 1/(2n)
    assert p.harmonic == pytest.approx(math.log(11e6) + 0.5772156649 + 1 / 22e6, rel=1e-9)
    assert zipf_frequency(1, p) == pytest.approx(4.5e6, rel=0.01)


def test_tiny_zipf_cost():
    p = ZipfParams(1.0, 3, 11)
    assert memory_cost_zipf_direct(Z_G, p) == 38
    assert memory_cost_closed_bucketed(Z_G, p) == 38
    single = ZipfParams(1.0, 1, 100)
    assert memory_cost_zipf_direct(Z_G, single) == slots_required(100, Z_G)
    assert memory_cost_closed_bucketed(Z_G, single) == slots_required(100, Z_G)
    assert memory_cost_closed_continuous(Z_G, single) == pytest.approx(146)


@pytest.mark.parametrize("alpha", [0.8, 1.0, 1.2])
@pytest.mark.parametrize("config", [Z_G, MULTI_POOL_ROWS["Z0"], FOUR_POOL_ROWS["Z'5"]])
def test_bucketed_equals_direct(alpha, config):
    p = ZipfParams(alpha, 10**4, 10**6)
    direct = memory_cost_zipf_direct(config, p)
    assert memory_cost_closed_bucketed(config, p) == direct
    assert memory_cost_histogram(config, p.frequency_histogram()) == direct


@settings(max_examples=40, deadline=None)
@given(exponent_tuples, st.floats(0.5, 1.5), st.integers(1, 3000), st.integers(1, 10**6),
       st.integers(0, 7))
def test_bucketed_equals_direct_random(config, alpha, vocab, n, s):
    s = min(s, config.pool_count - 1)
    p = ZipfParams(alpha, vocab, float(n))
    assert memory_cost_closed_bucketed(config, p, s) == memory_cost_zipf_direct(config, p, s)


def test_frequency_histogram_counts_every_rank():
    p = ZipfParams(1.1, 5000, 2e5)
    hist = p.frequency_histogram()
    assert sum(hist.values()) == 5000
    brute = {}
    for r in range(1, 5001):
        f = p.term_frequency(r)
        brute[f] = brute.get(f, 0) + 1
    assert hist == brute


def test_continuous_form_is_close():
    p = ZipfParams(1.0, 10**5, 10**7)
    direct = memory_cost_zipf_direct(Z_G, p)
    assert abs(memory_cost_closed_continuous(Z_G, p) / direct - 1) <= 0.05


def test_continuous_monotone_in_n():
    values = [memory_cost_closed_continuous(Z_G, ZipfParams(1.0, 1000, n))
              for n in np.linspace(1e3, 1e6, 25)]
    assert all(a <= b + 1e-6 for a, b in zip(values, values[1:]))


def test_full_scale_bucket_count_and_speed():
    import time
    p = ZipfParams(1.0, 11_000_000, 76e6)
    _ = p.harmonic
    t = time.perf_counter()
    cost = memory_cost_closed_bucketed(Z_G, p)
    assert time.perf_counter() - t < 1.0
    assert 10**7 <= cost < 10**9
    assert pointer_count(p.term_frequency(1), Z_G) == pytest.approx(4.5e6 / 2047, rel=0.01)


def test_enumeration_counts():
    assert sum(1 for _ in enumerate_configurations(range(13), [4])) == 715
    total = sum(1 for _ in enumerate_configurations(range(13), range(4, 9)))
    assert total == sum(math.comb(13, p) for p in range(4, 9)) == 6721


def test_sweep_contains_production():
    p = ZipfParams(1.0, 2000, 1e5)
    points = sweep_configurations(p.frequency_histogram(), {5: 3, 100: 1}, range(13), [4])
    assert len(points) == 715
    zg = next(pt for pt in points if pt.config == Z_G)
    assert zg.memory_cost == memory_cost_zipf_direct(Z_G, p)
    assert zg.time_cost == 3 * 1 + 2


_DISTINCT = list(enumerate_configurations(range(0, 13), range(1, 3)))


def pts(*pairs):
    return [SweepPoint(_DISTINCT[i], m, t) for i, (m, t) in enumerate(pairs)]


def test_pareto_examples():
    points = pts((1, 5), (2, 3), (10, 4), (11, 1))
    chosen = pareto_bucket_select(points, 2)
    assert [(p.memory_cost, p.time_cost) for p in chosen] == [(2, 3), (11, 1)]
    assert [(p.memory_cost, p.time_cost) for p in pareto_bucket_select(points, 1)] == [(11, 1)]
    with pytest.raises(ValueError):
        pareto_bucket_select(points, 0)


def test_pareto_tie_break():
    a = SweepPoint(PoolConfig((1, 3)), 5, 2)
    b = SweepPoint(PoolConfig((1, 2)), 5, 2)
    c = SweepPoint(PoolConfig((0, 2)), 6, 2)
    assert pareto_bucket_select([a, b, c], 1) == [b]


@given(st.lists(st.tuples(st.integers(0, 1000), st.integers(0, 1000)), min_size=1, max_size=60),
       st.integers(1, 20))
def test_pareto_bound_and_optimality(pairs, n):
    points = pts(*pairs)
    chosen = pareto_bucket_select(points, n)
    assert 1 <= len(chosen) <= n
    best_time = min(t for _, t in pairs)
    assert min(p.time_cost for p in chosen) == best_time


def test_dominance_implies_time_order():
    rng = random.Random(3)
    a, b = FOUR_POOL_ROWS["Z'6"], FOUR_POOL_ROWS["Z'5"]
    assert all(pointer_count(f, a) <= pointer_count(f, b) for f in range(1, 20000))
    for _ in range(20):
        q = [rng.randint(1, 20000) for _ in range(30)]
        assert time_cost(a, q) <= time_cost(b, q)


def test_query_histogram_is_seeded():
    p = ZipfParams(1.0, 1000, 1e5)
    h1 = query_histogram_from_zipf(p, 500, seed=4)
    assert h1 == query_histogram_from_zipf(p, 500, seed=4)
    assert sum(h1.values()) == 500
