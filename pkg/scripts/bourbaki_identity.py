"""Compare hdeg of Bourbaki-type modules with both readings of the length formula."""

from __future__ import annotations

import argparse

from tensortorsion.bounds import evaluate_bound
from tensortorsion.corpus import CorpusSpec, random_module


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=4400)
    ap.add_argument("--count", type=int, default=25)
    args = ap.parse_args(argv)
    for d in (2, 3):
        mods = random_module(CorpusSpec(seed=args.seed + d, count=args.count, d=d, kind="vector_bundle_bv",
                                        max_rank=3, max_degree=2))
        main_ok = literal_ok = 0
        for A in mods:
            rep = evaluate_bound("bv_hdeg", A)
            literal = next(p for p in rep.parts if p.name == "literal_rank_times_deg")
            main_ok += rep.holds
            literal_ok += literal.holds
            print(f"d={d} n={rep.detail['n']} hdeg={rep.lhs} deg={rep.detail['deg_A']} "
                  f"len={rep.detail['lambda_minors']} (d-1)deg(R)+len={rep.rhs} (d-1)deg(A)+len={literal.rhs}")
        print(f"d={d}: (d-1)deg(R)+len matches {main_ok}/{len(mods)}; (d-1)deg(A)+len matches {literal_ok}/{len(mods)}")


if __name__ == "__main__":
    main()
