"""In-memory real-time inverted index with slice-pool postings allocation."""

from .config import PoolConfig, Z_G
from .segment import Segment, tokenize
from .policy import SpPolicy

__all__ = ["PoolConfig", "Z_G", "Segment", "SpPolicy", "tokenize"]
