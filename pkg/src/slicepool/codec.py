"""Packing of postings and slice addresses into 32-bit words.

A posting keeps the document id in the high 24 bits and the token position in
the low 8, so comparing packed words orders postings by ``(doc_id, position)``.
A slice address keeps the pool code in the high bits, then the slice ordinal,
then the offset inside the slice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence, Union

from .config import PoolConfig
from .errors import AddressSpaceExhausted, ConfigurationError, InvalidAddress

DOC_ID_BITS = 24
POSITION_BITS = 8
MAX_DOC_ID = (1 << DOC_ID_BITS) - 1
MAX_POSITION = (1 << POSITION_BITS) - 1
WORD_MASK = 0xFFFFFFFF

NULL_ADDRESS = 0xFFFFFFFF


def encode_posting(doc_id: int, position: int) -> int:
    if not 0 <= doc_id <= MAX_DOC_ID:
        raise ValueError(f"doc_id {doc_id} does not fit in {DOC_ID_BITS} bits")
    if not 0 <= position <= MAX_POSITION:
        raise ValueError(f"position {position} does not fit in {POSITION_BITS} bits")
    return (doc_id << POSITION_BITS) | position


def decode_posting(word: int) -> tuple[int, int]:
    word &= WORD_MASK
    return word >> POSITION_BITS, word & MAX_POSITION


def posting_doc_id(word: int) -> int:
    return (word & WORD_MASK) >> POSITION_BITS


class SliceAddress(NamedTuple):
    pool: int
    slice: int
    offset: int


@dataclass(frozen=True)
class AddressLayout:
    """Bit widths of the address fields, per pool.

    ``offset_bits[p] == z_p`` and ``slice_bits[p] == 32 - pool_bits - z_p``.
    """

    pool_bits: int
    offset_bits: tuple[int, ...]
    slice_bits: tuple[int, ...]

    @property
    def pool_count(self) -> int:
        return len(self.offset_bits)

    def max_slices(self, pool: int) -> int:
        """Number of slice ordinals the allocator may hand out in ``pool``.

        In the pool whose code is all ones, the top ordinal would let an
        address collide with ``NULL_ADDRESS``, so it is withheld.
        """
        n = 1 << self.slice_bits[pool]
        if pool == (1 << self.pool_bits) - 1:
            n -= 1
        return n

    def encode(self, pool: int, slice_ordinal: int, offset: int) -> int:
        if not 0 <= pool < self.pool_count:
            raise ValueError(f"pool {pool} out of range")
        off_bits = self.offset_bits[pool]
        if not 0 <= offset < (1 << off_bits):
            raise ValueError(f"offset {offset} out of range for pool {pool}")
        if slice_ordinal < 0:
            raise ValueError("negative slice ordinal")
        if slice_ordinal >= (1 << self.slice_bits[pool]):
            raise AddressSpaceExhausted(
                f"slice ordinal {slice_ordinal} exceeds {self.slice_bits[pool]} bits "
                f"in pool {pool}")
        return ((pool << (32 - self.pool_bits))
                | (slice_ordinal << off_bits)
                | offset)

    def decode(self, word: int) -> SliceAddress:
        if word == NULL_ADDRESS:
            raise InvalidAddress("cannot decode the NULL address")
        pool = word >> (32 - self.pool_bits)
        if pool >= self.pool_count:
            raise InvalidAddress(f"unused pool code {pool} in address {word:#010x}")
        off_bits = self.offset_bits[pool]
        rest = word & ((1 << (32 - self.pool_bits)) - 1)
        return SliceAddress(pool, rest >> off_bits, rest & ((1 << off_bits) - 1))


def derive_address_layout(config: Union[PoolConfig, Sequence[int]]) -> AddressLayout:
    exps = config.exponents if isinstance(config, PoolConfig) else tuple(config)
    if not isinstance(config, PoolConfig):
        PoolConfig(exps)  # validates range and ordering
    pool_bits = max(1, math.ceil(math.log2(len(exps))))
    slice_bits = tuple(32 - pool_bits - z for z in exps)
    if min(slice_bits) < 1:
        raise ConfigurationError(f"no room for slice ordinals in {exps}")
    return AddressLayout(pool_bits, tuple(exps), slice_bits)


def encode_address(address: SliceAddress, layout: AddressLayout) -> int:
    return layout.encode(*address)


def decode_address(word: int, layout: AddressLayout) -> SliceAddress:
    return layout.decode(word)
