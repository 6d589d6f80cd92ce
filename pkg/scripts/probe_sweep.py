"""Smallest tensor power with torsion for seeded torsionfree non-free modules."""

from __future__ import annotations

import argparse
import json
from collections import Counter

from tensortorsion.bounds import tensor_power_probe
from tensortorsion.corpus import CorpusSpec, maximal_ideal, random_module
from tensortorsion.invariants import basic_invariants


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=5100)
    ap.add_argument("--count", type=int, default=20)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--emax", type=int, default=2)
    ap.add_argument("--budget", type=int, default=64)
    args = ap.parse_args(argv)
    reports = [tensor_power_probe(maximal_ideal(args.d), args.emax, module_id="m", budget=args.budget)]
    pool = random_module(CorpusSpec(seed=args.seed, count=args.count, d=args.d, kind="torsionfree", max_rank=2))
    for i, P in enumerate(pool):
        if basic_invariants(P).pd > 0:
            reports.append(tensor_power_probe(P, args.emax, module_id=f"tf-{args.seed}-{i}", budget=args.budget))
    for r in reports:
        print(json.dumps(r.to_dict(), sort_keys=True))
    print("e_found histogram:", dict(Counter(r.e_found for r in reports)))


if __name__ == "__main__":
    main()
