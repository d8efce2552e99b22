"""Starting-pool policies: where a term's first slice is allocated.

Every policy falls back to pool 0 for terms without history. With history
``H`` (the term's frequency in the preceding segment) and slice sizes
``s_p = 2**z_p``:

* ``DEFAULT`` ignores history.
* ``CEIL`` picks the pool with ``s_{p-1} < H <= s_p``; pool 0 if ``H <= s_0``.
* ``FLOOR`` picks the pool with ``s_p <= H < s_{p+1}``; pool 0 if ``H < s_0``.
* ``LAMBDA`` splits terms into long and short at the last slice size.

All three history policies send ``H >= s_{P-1}`` to the last pool.
"""

from __future__ import annotations

import bisect
import enum
from typing import Mapping, Optional

from .config import PoolConfig

HistoryTable = Mapping[str, int]


class SpPolicy(enum.Enum):
    DEFAULT = "default"
    CEIL = "ceil"
    FLOOR = "floor"
    LAMBDA = "lambda"

    @classmethod
    def parse(cls, name: str) -> SpPolicy:
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(
                f"unknown starting-pool policy {name!r}; "
                f"expected one of {[p.value for p in cls]}") from None


def pool_for_frequency(policy: SpPolicy, h: Optional[int], config: PoolConfig) -> int:
    if policy is SpPolicy.DEFAULT or h is None or h < 1:
        return 0
    sizes = config.slice_sizes
    last = len(sizes) - 1
    if h >= sizes[last]:
        return last
    if policy is SpPolicy.LAMBDA:
        return 0
    if policy is SpPolicy.CEIL:
        # first p with h <= sizes[p]
        return bisect.bisect_left(sizes, h)
    # FLOOR: last p with sizes[p] <= h, or 0 below the smallest slice
    return max(0, bisect.bisect_right(sizes, h) - 1)


def starting_pool(policy: SpPolicy, term: str, history: Optional[HistoryTable],
                  config: PoolConfig) -> int:
    h = history.get(term) if history else None
    return pool_for_frequency(policy, h, config)


class StartingPoolChooser:
    """Binds a policy, its history and a configuration for use during ingestion."""

    def __init__(self, policy: SpPolicy = SpPolicy.DEFAULT,
                 history: Optional[HistoryTable] = None,
                 config: Optional[PoolConfig] = None):
        self.policy = policy
        self.history = dict(history) if history else {}
        self.config = config

    def __call__(self, term: str) -> int:
        if self.policy is SpPolicy.DEFAULT:
            return 0
        return pool_for_frequency(self.policy, self.history.get(term), self.config)
