"""Slice pools: fixed-size slices carved out of append-only ``2**15``-word blocks.

Each term's postings live in a chain of slices. The first slice comes from the
term's starting pool; each later slice comes from the next pool, and the last
pool keeps supplying slices once it is reached. Every slice except a pool-0
starting slice reserves slot 0 for a pointer to the last posting of the
preceding slice (NULL for a starting slice). Written words are never moved.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass, field

from .codec import NULL_ADDRESS, AddressLayout, SliceAddress, derive_address_layout
from .config import BLOCK_EXPONENT, BLOCK_SIZE, PoolConfig
from .errors import AddressSpaceExhausted, ConfigurationError, InvalidAddress

_BLOCK_MASK = BLOCK_SIZE - 1
_EMPTY_BLOCK = array("I", [0]) * BLOCK_SIZE


class Pool:
    __slots__ = ("index", "exponent", "size", "blocks", "next_free_slice", "max_slices")

    def __init__(self, index: int, exponent: int, max_slices: int):
        self.index = index
        self.exponent = exponent
        self.size = 1 << exponent
        self.blocks: list[array] = []
        self.next_free_slice = 0
        self.max_slices = max_slices

    @property
    def slices_per_block(self) -> int:
        return BLOCK_SIZE >> self.exponent

    @property
    def slots_allocated(self) -> int:
        return self.next_free_slice * self.size

    def allocate(self) -> int:
        ordinal = self.next_free_slice
        if ordinal >= self.max_slices:
            raise AddressSpaceExhausted(
                f"pool {self.index} cannot address more than {self.max_slices} slices")
        if (ordinal << self.exponent) >> BLOCK_EXPONENT == len(self.blocks):
            self.blocks.append(array("I", _EMPTY_BLOCK))
        self.next_free_slice = ordinal + 1
        return ordinal


class TermTail:
    """Write cursor of one term.

    ``(pool, slice, offset)`` addresses the most recently written posting, so it
    doubles as the entry point for reverse traversal. ``remaining`` is the number
    of free slots left after it in the current slice.
    """

    __slots__ = ("pool", "slice", "offset", "remaining", "start_pool", "head_slice",
                 "frequency", "slots", "pointers")

    def __init__(self, start_pool: int):
        self.pool = start_pool
        self.slice = -1
        self.offset = -1
        self.remaining = 0
        self.start_pool = start_pool
        self.head_slice = -1
        self.frequency = 0
        self.slots = 0
        self.pointers = 0

    @property
    def address(self) -> SliceAddress | None:
        if self.slice < 0:
            return None
        return SliceAddress(self.pool, self.slice, self.offset)

    def first_slot(self, pool: int, ordinal: int) -> int:
        """Offset of the first posting slot in a slice of this term's chain."""
        if pool == 0 and ordinal == self.head_slice and self.start_pool == 0:
            return 0
        return 1

    def __repr__(self):
        return (f"TermTail(address={self.address}, remaining={self.remaining}, "
                f"start_pool={self.start_pool}, frequency={self.frequency})")


@dataclass
class PoolStats:
    pool: int
    slice_size: int
    blocks: int
    slices: int
    slots_allocated: int


@dataclass
class AllocatorStats:
    pools: list[PoolStats] = field(default_factory=list)

    @property
    def total_slots_allocated(self) -> int:
        return sum(p.slots_allocated for p in self.pools)

    @property
    def block_waste(self) -> int:
        """Words reserved in blocks but not yet handed out as slices."""
        return sum(p.blocks * BLOCK_SIZE - p.slots_allocated for p in self.pools)

    def to_dict(self) -> dict:
        return {
            "total_slots": self.total_slots_allocated,
            "block_waste": self.block_waste,
            "pools": [vars(p).copy() for p in self.pools],
        }


class PoolSet:
    """The P pools of one index segment."""

    def __init__(self, config: PoolConfig):
        if not isinstance(config, PoolConfig):
            config = PoolConfig(tuple(config))
        self.config = config
        self.layout: AddressLayout = derive_address_layout(config)
        self.pools = [Pool(p, z, self.layout.max_slices(p))
                      for p, z in enumerate(config.exponents)]
        last = self.pools[-1]
        self._growable = last.size - 1 > 0

    def __len__(self):
        return len(self.pools)

    def allocate_slice(self, pool: int, with_pointer: bool | None = None) -> SliceAddress:
        """Allocate a fresh slice and return the address of its slot 0.

        Slot 0 is set to NULL when the slice carries a pointer slot, which by
        default is every pool but pool 0.
        """
        if not 0 <= pool < len(self.pools):
            raise ConfigurationError(f"no pool {pool} in {self.config}")
        p = self.pools[pool]
        ordinal = p.allocate()
        if with_pointer is None:
            with_pointer = pool > 0
        if with_pointer:
            idx = ordinal << p.exponent
            p.blocks[idx >> BLOCK_EXPONENT][idx & _BLOCK_MASK] = NULL_ADDRESS
        return SliceAddress(pool, ordinal, 0)

    def _write(self, pool: int, ordinal: int, offset: int, word: int):
        p = self.pools[pool]
        idx = (ordinal << p.exponent) + offset
        p.blocks[idx >> BLOCK_EXPONENT][idx & _BLOCK_MASK] = word

    def read(self, pool: int, ordinal: int, offset: int) -> int:
        p = self.pools[pool]
        idx = (ordinal << p.exponent) + offset
        return p.blocks[idx >> BLOCK_EXPONENT][idx & _BLOCK_MASK]

    def read_slot(self, address: SliceAddress | int) -> int:
        if not isinstance(address, tuple):
            if address == NULL_ADDRESS:
                raise InvalidAddress("read of the NULL address")
            address = self.layout.decode(address)
        pool, ordinal, offset = address
        if not 0 <= pool < len(self.pools):
            raise InvalidAddress(f"no pool {pool}")
        p = self.pools[pool]
        if not 0 <= ordinal < p.next_free_slice or not 0 <= offset < p.size:
            raise InvalidAddress(f"address {tuple(address)} was never allocated")
        return self.read(pool, ordinal, offset)

    def slice_span(self, pool: int, ordinal: int) -> tuple[array, int]:
        """The block holding a slice and the slice's base index inside it."""
        p = self.pools[pool]
        idx = ordinal << p.exponent
        return p.blocks[idx >> BLOCK_EXPONENT], idx & _BLOCK_MASK

    def append_posting(self, tail: TermTail | None, posting: int,
                       start_pool: int = 0) -> TermTail:
        """Append one posting to a term's chain, allocating a slice if needed.

        ``tail`` is None for the first occurrence; a new cursor is returned then.
        Otherwise the cursor is advanced in place and returned.
        """
        if tail is None:
            if not 0 <= start_pool < len(self.pools):
                raise ConfigurationError(f"no pool {start_pool} in {self.config}")
            tail = TermTail(start_pool)
        if tail.remaining > 0:
            tail.offset += 1
            tail.remaining -= 1
            self._write(tail.pool, tail.slice, tail.offset, posting)
        elif tail.slice < 0:
            pool = tail.start_pool
            with_pointer = pool > 0
            ordinal = self.allocate_slice(pool, with_pointer).slice
            size = self.pools[pool].size
            first = 1 if with_pointer else 0
            tail.slice = tail.head_slice = ordinal
            tail.offset = first
            tail.remaining = size - first - 1
            tail.slots += size
            self._write(pool, ordinal, first, posting)
        else:
            if tail.pool == len(self.pools) - 1 and not self._growable:
                raise ConfigurationError(
                    f"{self.config} cannot grow a postings list past its first slice")
            previous = self.layout.encode(tail.pool, tail.slice, tail.offset)
            pool = self.config.next_pool(tail.pool)
            ordinal = self.allocate_slice(pool, with_pointer=False).slice
            size = self.pools[pool].size
            self._write(pool, ordinal, 0, previous)
            self._write(pool, ordinal, 1, posting)
            tail.pool = pool
            tail.slice = ordinal
            tail.offset = 1
            tail.remaining = size - 2
            tail.slots += size
            tail.pointers += 1
        tail.frequency += 1
        return tail

    def stats(self) -> AllocatorStats:
        return AllocatorStats([
            PoolStats(p.index, p.size, len(p.blocks), p.next_free_slice, p.slots_allocated)
            for p in self.pools
        ])


def create_pools(config: PoolConfig) -> PoolSet:
    return PoolSet(config)
