"""Line-oriented file formats: corpora, query sets, history and histograms.

* corpus: ``external_id<TAB>text`` per line
* queries: whitespace-separated terms per line
* history: ``term<TAB>frequency`` per line
* histogram: ``postings_length<TAB>count`` per line

All files are UTF-8 without a header.
"""

from __future__ import annotations

import os
from typing import Iterable, Iterator, Mapping

from .errors import DataFormatError
from .segment import Document, tokenize

PathLike = str | os.PathLike


def _lines(path: PathLike) -> Iterator[tuple[int, str]]:
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            yield lineno, line.rstrip("\n").rstrip("\r")


def read_corpus(path: PathLike) -> Iterator[Document]:
    for lineno, line in _lines(path):
        if not line:
            continue
        external_id, sep, text = line.partition("\t")
        if not sep or not external_id:
            raise DataFormatError("expected external_id<TAB>text", path, lineno)
        yield Document(external_id, text)


def write_corpus(path: PathLike, docs: Iterable[Document]):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for doc in docs:
            if "\t" in doc.external_id or "\n" in doc.text:
                raise DataFormatError(f"document {doc.external_id!r} cannot be serialized")
            fh.write(f"{doc.external_id}\t{doc.text}\n")


def parse_query(line: str) -> list[str]:
    """Normalize a query line with the ingestion tokenizer."""
    return [term for term, _ in tokenize(line)]


def read_queries(path: PathLike) -> list[list[str]]:
    queries = []
    for _, line in _lines(path):
        terms = parse_query(line)
        if terms:
            queries.append(terms)
    return queries


def write_queries(path: PathLike, queries: Iterable[Iterable[str]]):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for q in queries:
            fh.write(" ".join(q) + "\n")


def _read_pairs(path: PathLike, what: str, key=str) -> dict:
    table = {}
    for lineno, line in _lines(path):
        if not line:
            continue
        k, sep, v = line.rpartition("\t")
        try:
            if not sep or not k:
                raise ValueError
            count = int(v)
            k = key(k)
        except ValueError:
            raise DataFormatError(f"expected {what}", path, lineno) from None
        if count < 1:
            raise DataFormatError(f"{what}: count must be >= 1", path, lineno)
        table[k] = table.get(k, 0) + count
    return table


def read_history(path: PathLike) -> dict[str, int]:
    return _read_pairs(path, "term<TAB>frequency")


def write_history(path: PathLike, history: Mapping[str, int]):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for term, freq in history.items():
            fh.write(f"{term}\t{freq}\n")


def read_histogram(path: PathLike) -> dict[int, int]:
    return _read_pairs(path, "postings_length<TAB>count", key=int)


def write_histogram(path: PathLike, histogram: Mapping[int, int]):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for length in sorted(histogram):
            fh.write(f"{length}\t{histogram[length]}\n")
