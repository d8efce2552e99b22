"""Measured memory and query cost of the four-pool reference rows on a synthetic corpus.

Writes a CSV with one row per configuration (memory slots, pointer follows,
traversal and top-k times with 95% CIs).
"""

import argparse
import csv
import sys

from slicepool.bench import run_queries
from slicepool.config import FOUR_POOL_ROWS, MULTI_POOL_ROWS
from slicepool.segment import Segment
from slicepool.synth import SyntheticSpec, generate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--docs", type=int, default=50_000)
    ap.add_argument("--vocab", type=int, default=50_000)
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--queries", type=int, default=200)
    ap.add_argument("--trials", type=int, default=5)
    ap.add_argument("--k", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--multi", action="store_true", help="use the multi-pool rows instead")
    ap.add_argument("--out", help="CSV path (default stdout)")
    args = ap.parse_args()

    data = generate(SyntheticSpec(docs=args.docs, vocab=args.vocab, alpha=args.alpha,
                                  queries=args.queries, seed=args.seed))
    group = MULTI_POOL_ROWS if args.multi else FOUR_POOL_ROWS
    rows = []
    for name, config in group.items():
        seg = Segment(config)
        seg.ingest_all(data.documents)
        row = run_queries(seg, data.queries, args.trials, args.k).row().to_dict()
        rows.append({"row": name, **row})
        print(f"{name}: {row['memory_slots']} slots, {row['pointer_follows']} follows, "
              f"CT {row['ct_mean_ms']:.3f} ms", file=sys.stderr)

    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
    writer.writeheader()
    writer.writerows(rows)
    if args.out:
        fh.close()


if __name__ == "__main__":
    main()
