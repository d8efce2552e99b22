"""Analytical memory cost of the reference configurations under the Zipf model.

Prints one row per configuration with C_M (slots) and, when a query
histogram is available, C_T in pointer-follow units.
"""

import argparse
import time

from slicepool.config import FOUR_POOL_ROWS, MULTI_POOL_ROWS
from slicepool.cost_model import (ZipfParams, memory_cost_histogram, query_histogram_from_zipf,
                                  time_cost_histogram)
from slicepool.formats import read_histogram


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--vocab", type=int, default=11_000_000)
    ap.add_argument("--total-terms", type=float, default=76_000_000)
    ap.add_argument("--query-hist", help="postings-length histogram of query terms")
    ap.add_argument("--query-terms", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    started = time.perf_counter()
    params = ZipfParams(args.alpha, args.vocab, args.total_terms)
    memory_hist = params.frequency_histogram()
    if args.query_hist:
        query_hist = read_histogram(args.query_hist)
    else:
        query_hist = query_histogram_from_zipf(params, args.query_terms, args.seed)

    print(f"{'row':<5} {'config':<22} {'C_M (m slots)':>14} {'C_T (C_p)':>12}")
    for group in (MULTI_POOL_ROWS, FOUR_POOL_ROWS):
        costs = []
        for name, config in group.items():
            cm = memory_cost_histogram(config, memory_hist)
            ct = time_cost_histogram(config, query_hist)
            costs.append(cm)
            print(f"{name:<5} {str(config):<22} {cm / 1e6:>14.2f} {ct:>12}")
        ordered = all(a < b for a, b in zip(costs, costs[1:]))
        print(f"strictly increasing: {ordered}\n")
    print(f"elapsed {time.perf_counter() - started:.2f}s")


if __name__ == "__main__":
    main()
