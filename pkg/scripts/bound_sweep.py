"""Evaluate every bound on a seeded paired corpus and print ratio statistics."""

from __future__ import annotations

import argparse
import json
import time

from tensortorsion.bounds import BOUNDS, verify_suite
from tensortorsion.corpus import KINDS, load_corpus


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--kind", default="general", choices=KINDS)
    ap.add_argument("--pair-kind", default="general", choices=KINDS)
    ap.add_argument("--max-rank", type=int, default=2)
    ap.add_argument("--max-degree", type=int, default=2)
    ap.add_argument("--bounds", default=",".join(BOUNDS))
    ap.add_argument("--out", help="write the aggregate JSON here")
    args = ap.parse_args(argv)
    common = {"count": args.count, "d": args.d, "max_rank": args.max_rank, "max_degree": args.max_degree}
    spec = {"seed": args.seed, "kind": args.kind, **common,
            "pair_with": {"seed": args.seed + 1, "kind": args.pair_kind, **common}}
    start = time.perf_counter()
    items, meta = load_corpus(spec)
    res = verify_suite(items, args.bounds.split(","), metadata=meta)
    elapsed = time.perf_counter() - start
    print(f"{'bound':<16} {'applicable':>10} {'holds':>6} {'violated':>8}  max lhs/rhs")
    for b, agg in res.aggregate.items():
        print(f"{b:<16} {agg['applicable']:>10} {agg['holds']:>6} {agg['violated']:>8}  {agg['max_ratio']}")
    print(f"{len(items)} items in {elapsed:.1f}s; proven-tier violations: {len(res.proven_violations)}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(res.to_json() + "\n")


if __name__ == "__main__":
    main()
