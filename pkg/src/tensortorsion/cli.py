"""Command-line entry point: compute, tensor, verify, fuzz, example, probe."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .algebra import ParseError, RingMismatch
from .bounds import BOUNDS, PROVEN, CorpusItem, tensor_of, tensor_power_probe, verify_suite, h0
from .corpus import (
    BudgetExceeded,
    CorpusSpec,
    emit_module_file,
    load_corpus,
    named_example,
    parse_module_file,
    random_module,
)
from .homological import ContainmentError, HomogeneityError, minimalize
from .invariants import invariant_set

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _diag(kind: str, message: str, **extra) -> None:
    print(f"error: {message}", file=sys.stderr)
    print(json.dumps({"error": kind, "message": message, **extra}, sort_keys=True), file=sys.stderr)


def _write(payload: dict, out: str | None) -> None:
    text = json.dumps(payload, indent=1, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _metadata(P, seed=None) -> dict:
    return {"seed": seed, "p": P.ring.char, "variables": list(P.ring.names), "order": "grevlex/POT",
            "deg_convention": "length for finite-length modules"}


def cmd_compute(args) -> int:
    P = parse_module_file(args.module)
    inv = json.loads(invariant_set(P).to_json())
    _write({"invariants": inv, "metadata": _metadata(P)}, args.out)
    return EXIT_OK


def cmd_tensor(args) -> int:
    A = parse_module_file(args.a)
    B = parse_module_file(args.b)
    T = tensor_of(A, B)
    wanted = [w.strip() for w in args.invariants.split(",") if w.strip()]
    out = {}
    full = None
    for w in wanted:
        if w == "h0":
            out["h0"] = h0(T)
        else:
            full = full or json.loads(invariant_set(T).to_json())
            if w == "all":
                out.update(full)
            elif w in full:
                out[w] = full[w]
            else:
                raise UsageError(f"unknown invariant {w!r}")
    _write({"tensor": out, "metadata": _metadata(A)}, args.out)
    return EXIT_OK


def _bound_list(text: str | None) -> list[str] | None:
    if not text:
        return None
    ids = [b.strip() for b in text.split(",") if b.strip()]
    for b in ids:
        if b not in BOUNDS:
            raise UsageError(f"unknown bound id {b!r}")
    return ids


def _run_suite(items, meta, args) -> int:
    tiers = args.tier.split(",") if args.tier else None
    result = verify_suite(items, _bound_list(args.bounds), tiers, meta)
    payload = {"aggregate": result.aggregate, "metadata": result.metadata}
    if args.reports:
        payload["reports"] = [{"item": i, **r.to_dict()} for i, r in result.reports]
    _write(payload, args.out)
    bad = result.proven_violations
    if bad:
        if args.dump:
            dump = Path(args.dump)
            dump.mkdir(parents=True, exist_ok=True)
            by_id = {it.item_id: it for it in items}
            for item_id, rep in bad:
                it = by_id[item_id]
                emit_module_file(it.A, dump / f"{item_id}-A.json")
                if it.B is not None:
                    emit_module_file(it.B, dump / f"{item_id}-B.json")
                (dump / f"{item_id}-{rep.bound_id}.json").write_text(
                    json.dumps({"report": rep.to_dict(), "metadata": result.metadata}, sort_keys=True) + "\n")
        _diag("violation", f"{len(bad)} proven-tier violation(s)",
              violations=[{"item": i, "bound_id": r.bound_id} for i, r in bad])
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_verify(args) -> int:
    data = json.loads(Path(args.corpus).read_text()) if args.corpus else {}
    items, meta = load_corpus(data)
    return _run_suite(items, meta, args)


def cmd_fuzz(args) -> int:
    spec = {"seed": args.seed, "count": args.count, "d": args.d, "kind": args.kind,
            "max_rank": args.max_rank, "max_degree": args.max_degree, "p": args.p}
    if args.pair_kind:
        spec["pair_with"] = {"seed": args.seed + 1, "count": args.count, "d": args.d, "kind": args.pair_kind,
                             "max_rank": args.max_rank, "max_degree": args.max_degree, "p": args.p}
    items, meta = load_corpus(spec)
    return _run_suite(items, meta, args)


def cmd_example(args) -> int:
    params = {"n": args.n, "d": args.d, "seed": args.seed, "p": args.p}
    P = named_example(args.name, **params)
    if args.emit:
        out = Path(args.emit)
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"{args.name}.json"
        emit_module_file(P, path)
        print(str(path))
    else:
        from .corpus import module_to_dict
        print(json.dumps(module_to_dict(P), indent=1))
    return EXIT_OK


def cmd_probe(args) -> int:
    P = parse_module_file(args.module)
    rep = tensor_power_probe(P, args.emax, module_id=Path(args.module).stem, budget=args.budget)
    _write({"probe": rep.to_dict(), "metadata": _metadata(P)}, args.out)
    if rep.budget_exceeded:
        _diag("budget", "generator count of the tensor power exceeds the budget", e_max=args.emax)
        return EXIT_BUDGET
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tensortorsion", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="invariants of one module")
    c.add_argument("--module", required=True)
    c.add_argument("--out")
    c.set_defaults(func=cmd_compute)

    t = sub.add_parser("tensor", help="invariants of a tensor product")
    t.add_argument("a")
    t.add_argument("b")
    t.add_argument("--invariants", default="h0")
    t.add_argument("--out")
    t.set_defaults(func=cmd_tensor)

    for name, func in (("verify", cmd_verify), ("fuzz", cmd_fuzz)):
        v = sub.add_parser(name, help="evaluate bounds on a corpus")
        v.add_argument("--bounds")
        v.add_argument("--tier")
        v.add_argument("--out")
        v.add_argument("--dump", help="directory for reproducers of violations")
        v.add_argument("--reports", action="store_true", help="include every report in the output")
        if name == "verify":
            v.add_argument("--corpus")
        else:
            v.add_argument("--seed", type=int, required=True)
            v.add_argument("--count", type=int, default=10)
            v.add_argument("--d", type=int, default=2)
            v.add_argument("--kind", default="general")
            v.add_argument("--pair-kind")
            v.add_argument("--max-rank", type=int, default=3)
            v.add_argument("--max-degree", type=int, default=2)
            v.add_argument("--p", type=int, default=32003)
        v.set_defaults(func=func)

    e = sub.add_parser("example", help="emit a named example module")
    e.add_argument("--name", required=True)
    e.add_argument("--n", type=int, default=1)
    e.add_argument("--d", type=int, default=2)
    e.add_argument("--seed", type=int, default=0)
    e.add_argument("--p", type=int, default=32003)
    e.add_argument("--emit")
    e.set_defaults(func=cmd_example)

    pr = sub.add_parser("probe", help="smallest tensor power with torsion")
    pr.add_argument("--module", required=True)
    pr.add_argument("--emax", type=int, default=2)
    pr.add_argument("--budget", type=int, default=64)
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_probe)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        _diag("usage", str(exc))
        return EXIT_USAGE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except UsageError as exc:
        _diag("usage", str(exc))
        return EXIT_USAGE
    except HomogeneityError as exc:
        _diag("homogeneity", str(exc), entry=list(exc.entry))
        return EXIT_USAGE
    except ParseError as exc:
        _diag("parse", str(exc), line=exc.line, column=exc.column)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        _diag("budget", str(exc))
        return EXIT_BUDGET
    except (FileNotFoundError, json.JSONDecodeError, KeyError, ValueError, RingMismatch, ContainmentError) as exc:
        _diag("input", str(exc))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
