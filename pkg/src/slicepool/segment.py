"""The active index segment: tokenization, dictionary and reverse iteration."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional

from .allocator import PoolSet, TermTail
from .codec import MAX_DOC_ID, MAX_POSITION, NULL_ADDRESS, POSITION_BITS
from .config import PoolConfig, Z_G
from .errors import PositionOverflow, SegmentFull
from .policy import HistoryTable, SpPolicy, StartingPoolChooser

_TOKEN = re.compile(r"[#@]?[^\W_]+")
MAX_TOKENS = MAX_POSITION + 1


def tokenize(text: str) -> list[tuple[str, int]]:
    """Lowercase and split on non-alphanumerics, keeping ``#``/``@`` prefixes."""
    return [(tok, i) for i, tok in enumerate(_TOKEN.findall(text.lower()))]


@dataclass
class Document:
    external_id: str
    text: str


class ReversePostingsIterator:
    """Yields a term's packed postings from most recent to oldest.

    ``pointer_follows`` counts inter-slice pointers dereferenced so far.
    """

    def __init__(self, pools: PoolSet, tail: Optional[TermTail]):
        self._pools = pools
        self._tail = tail
        self._chunk: list[int] = []
        self._pos = 0
        self.pointer_follows = 0
        if tail is None or tail.slice < 0:
            self._cursor = None
        else:
            self._cursor = (tail.pool, tail.slice, tail.offset)

    def __iter__(self):
        return self

    def _load(self) -> bool:
        """Load the next run of postings (one slice's worth) into the buffer."""
        if self._cursor is None:
            return False
        pool, ordinal, offset = self._cursor
        tail = self._tail
        first = tail.first_slot(pool, ordinal)
        block, base = self._pools.slice_span(pool, ordinal)
        chunk = block[base + first:base + offset + 1]
        chunk.reverse()
        self._chunk = chunk
        self._pos = 0
        self._cursor = None
        if first == 1:
            pointer = block[base]
            if pointer != NULL_ADDRESS:
                self.pointer_follows += 1
                self._cursor = tuple(self._pools.layout.decode(pointer))
        return True

    def __next__(self) -> int:
        while self._pos >= len(self._chunk):
            if not self._load():
                raise StopIteration
        word = self._chunk[self._pos]
        self._pos += 1
        return word

    def next_doc_at_most(self, doc_id: int) -> Optional[int]:
        """Skip forward (backwards in time) to the first doc id <= ``doc_id``."""
        limit = ((doc_id + 1) << POSITION_BITS) - 1
        while True:
            while self._pos < len(self._chunk):
                word = self._chunk[self._pos]
                self._pos += 1
                if word <= limit:
                    return word >> POSITION_BITS
            if not self._load():
                return None

    def drain(self) -> int:
        """Read every remaining posting; returns how many were read."""
        n = len(self._chunk) - self._pos
        self._chunk = []
        self._pos = 0
        while self._load():
            n += len(self._chunk)
        self._chunk = []
        return n


class Segment:
    """An append-only index segment backed by slice pools.

    Documents must arrive in chronological order; doc ids are dense from 0.
    Tokens past position 255 are dropped and counted in ``truncated_tokens``
    unless ``strict_positions`` is set, in which case ingestion fails.
    """

    def __init__(self, config: PoolConfig = Z_G, policy: SpPolicy = SpPolicy.DEFAULT,
                 history: Optional[HistoryTable] = None, strict_positions: bool = False,
                 capacity: int = MAX_DOC_ID + 1):
        if not isinstance(config, PoolConfig):
            config = PoolConfig(tuple(config))
        self.config = config
        self.pools = PoolSet(config)
        self.policy = policy
        self.choose_pool = StartingPoolChooser(policy, history, config)
        self.strict_positions = strict_positions
        self.capacity = min(capacity, MAX_DOC_ID + 1)
        self.dictionary: dict[str, TermTail] = {}
        self.external_ids: list[str] = []
        self.truncated_tokens = 0
        self.postings = 0

    @property
    def doc_count(self) -> int:
        return len(self.external_ids)

    def __len__(self):
        return self.doc_count

    def ingest(self, doc: Document | str, external_id: Optional[str] = None) -> int:
        if isinstance(doc, Document):
            external_id, text = doc.external_id, doc.text
        else:
            text = doc
        doc_id = len(self.external_ids)
        if doc_id >= self.capacity:
            raise SegmentFull(f"segment holds at most {self.capacity} documents")
        tokens = tokenize(text)
        if len(tokens) > MAX_TOKENS:
            if self.strict_positions:
                raise PositionOverflow(
                    f"document {external_id or doc_id} has {len(tokens)} tokens; "
                    f"at most {MAX_TOKENS} positions fit")
            self.truncated_tokens += len(tokens) - MAX_TOKENS
            tokens = tokens[:MAX_TOKENS]
        self.external_ids.append(external_id if external_id is not None else str(doc_id))
        base = doc_id << POSITION_BITS
        dictionary = self.dictionary
        append = self.pools.append_posting
        for term, position in tokens:
            tail = dictionary.get(term)
            if tail is None:
                dictionary[term] = append(None, base | position, self.choose_pool(term))
            else:
                append(tail, base | position)
        self.postings += len(tokens)
        return doc_id

    def ingest_all(self, docs: Iterable[Document]) -> int:
        n = 0
        for doc in docs:
            self.ingest(doc)
            n += 1
        return n

    def open_iterator(self, term: str) -> ReversePostingsIterator:
        return ReversePostingsIterator(self.pools, self.dictionary.get(term))

    def frequency(self, term: str) -> int:
        tail = self.dictionary.get(term)
        return tail.frequency if tail else 0

    def export_term_stats(self) -> dict[str, int]:
        return {term: tail.frequency for term, tail in self.dictionary.items()}

    def start_pools(self) -> dict[str, int]:
        return {term: tail.start_pool for term, tail in self.dictionary.items()}

    def segment_memory_slots(self) -> int:
        return self.pools.stats().total_slots_allocated

    def stats(self) -> dict:
        report = self.pools.stats().to_dict()
        report.update(
            config=self.config.label,
            sp_policy=self.policy.value,
            documents=self.doc_count,
            terms=len(self.dictionary),
            postings=self.postings,
            truncated_tokens=self.truncated_tokens,
        )
        return report

