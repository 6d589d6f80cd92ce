"""Run the conditional bounds on their guarded corpora and archive flagged reports."""

from __future__ import annotations

import argparse
import json
from pathlib import Path

from tensortorsion.bounds import CONDITIONAL, CorpusItem, verify_suite
from tensortorsion.corpus import CorpusSpec, cautionary2x2, emit_module_file, random_module


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=5000)
    ap.add_argument("--count", type=int, default=40)
    ap.add_argument("--nmax", type=int, default=30, help="largest n of the cautionary family")
    ap.add_argument("--out", default="artifacts/conditional")
    args = ap.parse_args(argv)
    squares = random_module(CorpusSpec(seed=args.seed, count=args.count, kind="dim1_square", max_rank=2))
    equi = random_module(CorpusSpec(seed=args.seed + 1, count=args.count, kind="equigenerated_deg0", max_rank=2))
    items = [CorpusItem(f"sq-{i}", P) for i, P in enumerate(squares)]
    items += [CorpusItem(f"eq-{i}", P) for i, P in enumerate(equi)]
    items += [CorpusItem(f"cautionary-{n}", cautionary2x2(n)) for n in range(1, args.nmax + 1)]
    res = verify_suite(items, tiers=[CONDITIONAL], metadata={"seed": args.seed})
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    by_id = {it.item_id: it for it in items}
    flagged = []
    for item_id, rep in res.reports:
        if rep.applicable and (rep.violated or any(not p.holds for p in rep.parts)):
            flagged.append({"item": item_id, **rep.to_dict()})
            emit_module_file(by_id[item_id].A, out / f"{item_id}.json")
    (out / "reports.json").write_text(json.dumps({"aggregate": res.aggregate, "metadata": res.metadata,
                                                  "flagged": flagged}, indent=1, sort_keys=True) + "\n")
    print(json.dumps(res.aggregate, indent=1, sort_keys=True))
    print(f"{len(flagged)} flagged reports archived in {out}")


if __name__ == "__main__":
    main()
