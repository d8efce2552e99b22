"""Pool configurations: the slice-size exponents ``Z = <z_0, ..., z_{P-1}>``."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import ConfigurationError

BLOCK_EXPONENT = 15
BLOCK_SIZE = 1 << BLOCK_EXPONENT
MAX_POOLS = 8
MAX_EXPONENT = 12


@dataclass(frozen=True)
class PoolConfig:
    """Slice-size exponents for each pool, in allocation order.

    Pool ``p`` hands out slices of ``2**exponents[p]`` words. Exponents must be
    strictly increasing and small enough that every slice size divides the
    ``2**15``-word block.
    """

    exponents: tuple[int, ...]
    block_exponent: int = field(default=BLOCK_EXPONENT, repr=False)

    def __post_init__(self):
        exps = tuple(int(z) for z in self.exponents)
        object.__setattr__(self, "exponents", exps)
        if not 1 <= len(exps) <= MAX_POOLS:
            raise ConfigurationError(
                f"pool count must be in [1, {MAX_POOLS}], got {len(exps)}")
        for z in exps:
            if not 0 <= z <= MAX_EXPONENT:
                raise ConfigurationError(
                    f"slice exponent {z} outside [0, {MAX_EXPONENT}]")
        if any(a >= b for a, b in zip(exps, exps[1:])):
            raise ConfigurationError(f"slice exponents must strictly increase: {exps}")
        if max(exps) > self.block_exponent:
            raise ConfigurationError("slices may not be larger than a block")

    @classmethod
    def parse(cls, text: str) -> PoolConfig:
        """Parse ``"1,4,7,11"`` or ``"1-4-7-11"``."""
        sep = "," if "," in text else "-"
        try:
            return cls(tuple(int(part) for part in text.strip().split(sep) if part))
        except ValueError as exc:
            if isinstance(exc, ConfigurationError):
                raise
            raise ConfigurationError(f"cannot parse pool configuration {text!r}") from exc

    @property
    def pool_count(self) -> int:
        return len(self.exponents)

    @property
    def slice_sizes(self) -> tuple[int, ...]:
        return tuple(1 << z for z in self.exponents)

    @property
    def label(self) -> str:
        return "-".join(str(z) for z in self.exponents)

    def next_pool(self, pool: int) -> int:
        """Pool that receives the slice following one in ``pool``."""
        return min(pool + 1, self.pool_count - 1)

    def __str__(self):
        return "<" + ",".join(str(z) for z in self.exponents) + ">"


def configs(rows: Iterable[Iterable[int]]) -> list[PoolConfig]:
    return [PoolConfig(tuple(r)) for r in rows]


# Production configuration and the rows of the published comparison.
Z_G = PoolConfig((1, 4, 7, 11))

MULTI_POOL_ROWS = {
    "Z0": PoolConfig((0, 1, 2, 3, 4, 5, 6, 8)),
    "Z1": PoolConfig((1, 2, 3, 5, 6, 8, 9, 10)),
    "Z2": PoolConfig((1, 3, 5, 6, 8, 9, 10, 11)),
    "Z3": PoolConfig((1, 3, 5, 7, 8, 10, 12)),
    "Z4": PoolConfig((1, 3, 6, 8, 9, 11, 12)),
    "Zg": Z_G,
    "Z5": PoolConfig((2, 6, 9, 12)),
}

FOUR_POOL_ROWS = {
    "Z'0": PoolConfig((1, 2, 3, 5)),
    "Z'1": PoolConfig((1, 3, 5, 6)),
    "Z'2": PoolConfig((1, 3, 5, 7)),
    "Z'3": PoolConfig((1, 3, 6, 8)),
    "Z'4": PoolConfig((2, 5, 7, 9)),
    "Z'5": PoolConfig((2, 5, 8, 10)),
    "Z'6": PoolConfig((2, 5, 8, 11)),
    "Z'7": PoolConfig((2, 6, 9, 12)),
}

# Configurations revisited with history-based starting pools.
HISTORY_CONFIGS = {
    "Zg": Z_G,
    "Z2": MULTI_POOL_ROWS["Z2"],
    "Z'5": FOUR_POOL_ROWS["Z'5"],
}
