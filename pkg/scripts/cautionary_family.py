"""Table for coker [[x, y^n], [0, x]]: h0(A (x) A), hdeg and the dim-2 CM comparisons."""

from __future__ import annotations

import argparse
import json

from tensortorsion.bounds import evaluate_bound, h0_tensor
from tensortorsion.corpus import cautionary2x2
from tensortorsion.invariants import hdeg, multiplicity


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--nmax", type=int, default=30)
    ap.add_argument("--json", action="store_true", help="one JSON object per line")
    args = ap.parse_args(argv)
    if not args.json:
        print(f"{'n':>3} {'h0(AxA)':>8} {'deg':>4} {'hdeg':>5} {'3hdeg^4':>8} {'2hdeg^4':>8} main  primary-branch")
    for n in range(1, args.nmax + 1):
        A = cautionary2x2(n)
        rep = evaluate_bound("dim2cm", A)
        branch = next((p for p in rep.parts if p.name == "primary_annihilator_branch"), None)
        row = {"n": n, "h0": h0_tensor(A, A), "deg": multiplicity(A), "hdeg": hdeg(A), "rhs": rep.rhs,
               "holds": rep.holds, "branch_rhs": branch.rhs if branch else None,
               "branch_holds": branch.holds if branch else None}
        if args.json:
            print(json.dumps(row, sort_keys=True))
        else:
            print(f"{n:>3} {row['h0']:>8} {row['deg']:>4} {row['hdeg']:>5} {row['rhs']:>8} "
                  f"{str(row['branch_rhs']):>8} {'ok' if row['holds'] else 'FAIL':>4}  "
                  f"{'ok' if row['branch_holds'] else 'FAIL'}")


if __name__ == "__main__":
    main()
