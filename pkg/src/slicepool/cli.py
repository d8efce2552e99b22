"""Command-line harness.

Exit codes: 0 success, 1 usage, 2 data error, 3 capacity or address-space
exhaustion.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
import time

from . import formats
from .bench import CI_METHOD, build_segment, history_from, run_queries, split_half
from .config import PoolConfig, Z_G
from .cost_model import (ZipfParams, pareto_bucket_select, query_histogram_from_zipf,
                         sweep_configurations)
from .errors import CapacityError, ConfigurationError, DataFormatError
from .policy import SpPolicy
from .synth import SyntheticSpec, generate

log = logging.getLogger("slicepool")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CAPACITY = 0, 1, 2, 3

SWEEP_FIELDS = ["pools", "Z", "memory_cost_slots", "time_cost_cp_units", "selected"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _config(text: str) -> PoolConfig:
    try:
        return PoolConfig.parse(text)
    except ConfigurationError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _int_range(text: str) -> range:
    lo, sep, hi = text.partition("-")
    try:
        lo_i = int(lo)
        hi_i = int(hi) if sep else lo_i
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or N-M, got {text!r}")
    if hi_i < lo_i:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return range(lo_i, hi_i + 1)


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _write_text(path, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _dumps(obj) -> str:
    # NaN is not valid JSON; emit null instead
    def clean(x):
        if isinstance(x, float) and not math.isfinite(x):
            return None
        if isinstance(x, dict):
            return {k: clean(v) for k, v in x.items()}
        if isinstance(x, list):
            return [clean(v) for v in x]
        return x
    return json.dumps(clean(obj), indent=2, sort_keys=False) + "\n"


def _load_index_inputs(args):
    """Corpus documents plus the history implied by --history / --split-half."""
    docs = list(formats.read_corpus(args.corpus))
    history = None
    history_source = None
    if args.split_half:
        if args.history:
            raise UsageError("--history and --split-half are mutually exclusive")
        first, docs = split_half(docs)
        history = history_from(first, Z_G)
        history_source = "split-half"
        if getattr(args, "history_out", None):
            formats.write_history(args.history_out, history)
    elif args.history:
        history = formats.read_history(args.history)
        history_source = str(args.history)
    if args.sp != "default" and history is None:
        log.warning("policy %s without history: every term starts in pool 0", args.sp)
    return docs, history, history_source


def cmd_build(args) -> int:
    docs, history, source = _load_index_inputs(args)
    seg = build_segment(docs, args.config, SpPolicy.parse(args.sp), history,
                        strict_positions=args.strict_positions)
    report = seg.stats()
    report["history"] = source
    report["history_terms"] = len(history) if history else 0
    _write_text(args.out, _dumps(report))
    return EXIT_OK


def cmd_query(args) -> int:
    docs, history, source = _load_index_inputs(args)
    try:
        queries = formats.read_queries(args.queries)
    except FileNotFoundError:
        raise DataFormatError(f"query file not found: {args.queries}") from None
    policy = SpPolicy.parse(args.sp)
    rows = []
    for config in args.config_list or [Z_G]:
        seg = build_segment(docs, config, policy, history,
                            strict_positions=args.strict_positions)
        run = run_queries(seg, queries, trials=args.trials, k=args.k)
        rows.append(run.row().to_dict())
        if args.dump_results:
            for terms, result in zip(queries, run.results):
                print(f"{config.label}\t{' '.join(terms)}\t{' '.join(map(str, result))}",
                      file=sys.stderr)
    if args.format == "json":
        meta = {"ci_method": CI_METHOD, "time_unit": "ms", "history": source,
                "corpus": str(args.corpus), "queries": str(args.queries)}
        _write_text(args.out, _dumps({"metadata": meta, "rows": rows}))
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: ("" if isinstance(v, float) and math.isnan(v) else v)
                             for k, v in row.items()})
        _write_text(args.out, buf.getvalue())
    return EXIT_OK


def cmd_sweep(args) -> int:
    started = time.perf_counter()
    params = ZipfParams(args.alpha, args.vocab, args.total_terms)
    if args.memory_hist:
        memory_hist = formats.read_histogram(args.memory_hist)
        memory_source = str(args.memory_hist)
    else:
        memory_hist = params.frequency_histogram()
        memory_source = "zipf"
    if args.query_hist:
        query_hist = formats.read_histogram(args.query_hist)
        query_source = str(args.query_hist)
    else:
        query_hist = query_histogram_from_zipf(params, args.query_terms, args.seed,
                                               args.query_bias)
        query_source = "zipf-sample"
    points = sweep_configurations(memory_hist, query_hist, args.exponents, args.pools)
    for p in pareto_bucket_select(points, args.buckets):
        p.selected = True
    rows = [{"pools": p.config.pool_count, "Z": p.config.label,
             "memory_cost_slots": p.memory_cost, "time_cost_cp_units": p.time_cost,
             "selected": int(p.selected)} for p in points]
    meta = {
        "alpha": args.alpha, "vocab": args.vocab, "total_terms": args.total_terms,
        "frequency_discretization": "max(1, floor(N * p(r)))",
        "memory_source": memory_source, "query_source": query_source,
        "query_terms": sum(query_hist.values()), "buckets": args.buckets,
        "exponents": [args.exponents.start, args.exponents.stop - 1],
        "pools": [args.pools.start, args.pools.stop - 1],
        "seed": args.seed, "elapsed_s": round(time.perf_counter() - started, 3),
    }
    if args.format == "json":
        _write_text(args.out, _dumps({"metadata": meta, "rows": rows}))
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=SWEEP_FIELDS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        _write_text(args.out, buf.getvalue())
        if args.out and args.out != "-":
            _write_text(f"{args.out}.meta.json", _dumps(meta))
    return EXIT_OK


def cmd_gen(args) -> int:
    spec = SyntheticSpec(
        docs=args.docs, vocab=args.vocab, alpha=args.alpha,
        min_len=args.min_len, max_len=args.max_len,
        queries=args.queries, query_min_len=args.query_min_len,
        query_max_len=args.query_max_len, query_bias=args.query_bias, seed=args.seed)
    data = generate(spec)
    formats.write_corpus(args.out, data.documents)
    if args.query_out:
        formats.write_queries(args.query_out, data.queries)
    if args.emit_histogram:
        formats.write_histogram(args.emit_histogram, data.query_histogram())
    return EXIT_OK


def cmd_stats(args) -> int:
    docs = list(formats.read_corpus(args.corpus))
    if args.split_half:
        docs, _ = split_half(docs)
    history = history_from(docs, Z_G)
    if args.out and args.out != "-":
        formats.write_history(args.out, history)
    else:
        for term, freq in history.items():
            sys.stdout.write(f"{term}\t{freq}\n")
    return EXIT_OK


def _index_args(p: argparse.ArgumentParser):
    p.add_argument("corpus", help="external_id<TAB>text per line")
    p.add_argument("--sp", choices=[x.value for x in SpPolicy], default="default",
                   help="starting-pool policy")
    p.add_argument("--history", help="term<TAB>frequency file from a previous segment")
    p.add_argument("--split-half", action="store_true",
                   help="take history from the first half of the corpus, index the second")
    p.add_argument("--history-out", help="write the split-half history here")
    p.add_argument("--strict-positions", action="store_true",
                   help="fail on documents longer than 256 tokens instead of truncating")
    p.add_argument("--out", help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="slicepool", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("build", help="index a corpus and report slot usage")
    _index_args(p)
    p.add_argument("--config", type=_config, default=Z_G, help="slice exponents, e.g. 1,4,7,11")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("query", help="time traversal and top-k retrieval of a query set")
    _index_args(p)
    p.add_argument("queries", help="one query per line")
    p.add_argument("--config", type=_config, action="append", dest="config_list",
                   help="repeat to compare configurations")
    p.add_argument("--trials", type=_positive, default=3)
    p.add_argument("--k", type=_positive, default=100)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--dump-results", action="store_true",
                   help="log each query's result doc ids to stderr")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("sweep", help="analytical costs of every configuration in range")
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--vocab", type=int, default=11_000_000)
    p.add_argument("--total-terms", type=float, default=76_000_000)
    p.add_argument("--memory-hist", help="term-frequency histogram instead of the Zipf model")
    p.add_argument("--query-hist", help="postings-length histogram of query terms")
    p.add_argument("--query-terms", type=_positive, default=10_000,
                   help="query terms to sample when no --query-hist is given")
    p.add_argument("--query-bias", type=float, default=None,
                   help="rank exponent of sampled query terms (default: --alpha)")
    p.add_argument("--exponents", type=_int_range, default=range(0, 13))
    p.add_argument("--pools", type=_int_range, default=range(4, 9))
    p.add_argument("--buckets", type=_positive, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gen", help="write a synthetic Zipfian corpus and query set")
    p.add_argument("--out", required=True, help="corpus file")
    p.add_argument("--query-out", help="query file")
    p.add_argument("--docs", type=_positive, default=10_000)
    p.add_argument("--vocab", type=_positive, default=500)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--min-len", type=int, default=4)
    p.add_argument("--max-len", type=int, default=24)
    p.add_argument("--queries", type=int, default=100)
    p.add_argument("--query-min-len", type=_positive, default=1)
    p.add_argument("--query-max-len", type=_positive, default=4)
    p.add_argument("--query-bias", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--emit-histogram", metavar="FILE",
                   help="write the postings-length histogram of the query terms")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", help="export term frequencies as a history file")
    p.add_argument("corpus")
    p.add_argument("--split-half", action="store_true", help="first half of the corpus only")
    p.add_argument("--out")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except (UsageError, ConfigurationError) as exc:
        print(f"slicepool: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataFormatError, FileNotFoundError, UnicodeDecodeError) as exc:
        print(f"slicepool: {exc}", file=sys.stderr)
        return EXIT_DATA
    except CapacityError as exc:
        print(f"slicepool: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except ValueError as exc:
        print(f"slicepool: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
