"""Starting-pool policies with split-half history on a synthetic corpus.

The first half of the corpus provides term frequencies; the second half is
indexed under every policy for each configuration revisited with history.
"""

import argparse

from slicepool.bench import history_from, run_queries, split_half
from slicepool.config import HISTORY_CONFIGS, Z_G
from slicepool.policy import SpPolicy
from slicepool.segment import Segment
from slicepool.synth import SyntheticSpec, generate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--docs", type=int, default=60_000)
    ap.add_argument("--vocab", type=int, default=50_000)
    ap.add_argument("--queries", type=int, default=200)
    ap.add_argument("--trials", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    data = generate(SyntheticSpec(docs=args.docs, vocab=args.vocab, queries=args.queries,
                                  seed=args.seed))
    first, second = split_half(data.documents)
    history = history_from(first, Z_G)

    print(f"{'config':<10} {'policy':<8} {'slots':>10} {'follows':>9} {'CT ms':>8} {'RK ms':>8}")
    for name, config in HISTORY_CONFIGS.items():
        for policy in SpPolicy:
            seg = Segment(config, policy, history)
            seg.ingest_all(second)
            row = run_queries(seg, data.queries, args.trials).row()
            print(f"{name:<10} {policy.value:<8} {row.memory_slots:>10} {row.pointer_follows:>9} "
                  f"{row.ct_mean_ms:>8.3f} {row.rk_mean_ms:>8.3f}")


if __name__ == "__main__":
    main()
