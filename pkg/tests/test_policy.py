import pytest
from hypothesis import given, strategies as st

from slicepool.config import HISTORY_CONFIGS, PoolConfig, Z_G
from slicepool.policy import SpPolicy, pool_for_frequency, starting_pool
from slicepool.segment import Segment

configs = st.lists(st.integers(0, 12), min_size=1, max_size=8, unique=True).map(
    lambda xs: PoolConfig(tuple(sorted(xs))))


def literal_oracle(policy, h, config):
    """The policy inequalities checked one pool at a time."""
    s = config.slice_sizes
    last = len(s) - 1
    if policy is SpPolicy.DEFAULT or h is None:
        return 0
    if h >= s[last]:
        return last
    if policy is SpPolicy.LAMBDA:
        return 0
    if policy is SpPolicy.CEIL:
        if h <= s[0]:
            return 0
        return next(p for p in range(1, last + 1) if s[p - 1] < h <= s[p])
    if h < s[0]:
        return 0
    return next(p for p in range(last) if s[p] <= h < s[p + 1])


@pytest.mark.parametrize("policy, h, pool", [
    (SpPolicy.CEIL, 20, 2), (SpPolicy.FLOOR, 20, 1),
    (SpPolicy.LAMBDA, 20, 0), (SpPolicy.LAMBDA, 3000, 3),
    (SpPolicy.DEFAULT, 3000, 0), (SpPolicy.CEIL, 16, 1), (SpPolicy.FLOOR, 16, 1),
    (SpPolicy.FLOOR, 1, 0), (SpPolicy.CEIL, 2, 0), (SpPolicy.CEIL, 2048, 3),
    (SpPolicy.FLOOR, 2047, 2),
])
def test_examples(policy, h, pool):
    assert starting_pool(policy, "t", {"t": h}, Z_G) == pool


def test_unknown_term_starts_in_pool_zero():
    for policy in SpPolicy:
        assert starting_pool(policy, "new", {"old": 5000}, Z_G) == 0
        assert starting_pool(policy, "new", None, Z_G) == 0


@given(st.sampled_from(list(SpPolicy)), st.integers(1, 10**5), configs)
def test_matches_literal_oracle(policy, h, config):
    assert pool_for_frequency(policy, h, config) == literal_oracle(policy, h, config)


@given(st.integers(1, 10**5), configs)
def test_floor_never_above_ceil_and_lambda_extremes(h, config):
    floor = pool_for_frequency(SpPolicy.FLOOR, h, config)
    ceil = pool_for_frequency(SpPolicy.CEIL, h, config)
    assert floor <= ceil
    assert pool_for_frequency(SpPolicy.LAMBDA, h, config) in (0, config.pool_count - 1)


def test_boundaries_at_slice_sizes():
    for config in HISTORY_CONFIGS.values():
        for p, size in enumerate(config.slice_sizes):
            assert pool_for_frequency(SpPolicy.CEIL, size, config) == p
            assert pool_for_frequency(SpPolicy.FLOOR, size, config) == p


def test_parse():
    assert SpPolicy.parse("CEIL") is SpPolicy.CEIL
    with pytest.raises(ValueError):
        SpPolicy.parse("sideways")


def test_default_is_identical_to_no_history():
    docs = [f"a b c{i % 7} " + "z " * (i % 40) for i in range(500)]
    plain, hist = Segment(Z_G), Segment(Z_G, SpPolicy.DEFAULT, {"a": 10**5, "z": 10**5})
    for d in docs:
        plain.ingest(d)
        hist.ingest(d)
    assert plain.pools.stats() == hist.pools.stats()
    for term in plain.dictionary:
        assert list(plain.open_iterator(term)) == list(hist.open_iterator(term))
