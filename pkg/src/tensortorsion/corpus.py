"""Module files, named example families and seeded random corpora."""

from __future__ import annotations

import json
import logging
import random
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Sequence

from .algebra import GradedFreeModule, ParseError, Poly, Ring, format_poly
from .groebner import Submodule, syzygies
from .homological import ModulePres, minimalize
from .invariants import basic_invariants, determinant, krull_dim, minors_ideal

log = logging.getLogger(__name__)

KINDS = ("general", "torsionfree", "vector_bundle_bv", "dim1_square", "equigenerated_deg0")


class BudgetExceeded(RuntimeError):
    """A retry budget ran out before a valid instance was drawn."""


# --- module files ------------------------------------------------------------

def module_from_dict(data: dict, source: str = "<data>") -> ModulePres:
    try:
        p = int(data.get("field", {}).get("char", 32003))
        names = tuple(data["variables"])
        row_twists = [int(a) for a in data["row_twists"]]
        matrix = data.get("matrix", [])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"{source}: malformed module file ({exc})") from exc
    ring = Ring(len(names), p, names)
    if matrix and len(matrix) != len(row_twists):
        raise ParseError(f"{source}: matrix has {len(matrix)} rows but {len(row_twists)} row twists")
    rows = []
    for i, row in enumerate(matrix):
        parsed = []
        for j, text in enumerate(row):
            try:
                parsed.append(ring.parse(str(text)))
            except ParseError as exc:
                raise ParseError(f"{source}: entry ({i},{j}): {exc}", column=exc.column, line=i + 1) from exc
        rows.append(parsed)
    if not rows:
        rows = [[] for _ in row_twists]
    meta = {"source": source}
    if "forms" in data:
        meta["forms"] = [ring.parse(s) for s in data["forms"]]
    P = ModulePres.from_rows(ring, row_twists, rows, meta=meta)
    return P


def parse_module_file(path) -> ModulePres:
    """Read a module file; returns the minimalized presentation."""
    path = Path(path)
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc.msg}", column=exc.colno, line=exc.lineno) from exc
    P = module_from_dict(data, str(path))
    Q = minimalize(P)
    Q.meta.update(P.meta)
    return Q


def module_to_dict(P: ModulePres) -> dict:
    ring = P.ring
    M = P.matrix
    out = {
        "field": {"char": ring.char},
        "variables": list(ring.names),
        "row_twists": list(M.target.twists),
        "matrix": [[format_poly(e) for e in row] for row in M.entries] if M.source.rank else [],
    }
    if P.meta.get("forms"):
        out["forms"] = [format_poly(f) for f in P.meta["forms"]]
    return out


def emit_module_file(P: ModulePres, path) -> None:
    Path(path).write_text(json.dumps(module_to_dict(P), indent=1) + "\n")


# --- named examples -------------------------------------------------------------

def cautionary2x2(n: int, p: int = 32003) -> ModulePres:
    """coker [[x, y^n], [0, x]] over k[x,y]."""
    if n < 1:
        raise ValueError("n must be positive")
    R = Ring(2, p, ("x", "y"))
    x, y = R.gens()
    return ModulePres.from_rows(R, (0, n - 1), [[x, y ** n], [0, x]], meta={"example": f"cautionary2x2 n={n}"})


def maximal_ideal(d: int, p: int = 32003) -> ModulePres:
    """m = (x_1..x_d) presented by its Koszul syzygies."""
    R = Ring(d, p)
    S = syzygies(Submodule.ideal(R, R.gens()))
    P = ModulePres(S.as_matrix(), meta={"example": f"maximal_ideal d={d}"})
    return minimalize(P)


def degabc(forms: Sequence[Poly]) -> ModulePres:
    """R/(z_1..z_n) with z_i the product of all forms but the i-th."""
    forms = list(forms)
    if len(forms) < 2:
        raise ValueError("need at least two forms")
    R = forms[0].ring
    zs = []
    for i in range(len(forms)):
        z = R.one()
        for j, f in enumerate(forms):
            if j != i:
                z = z * f
        zs.append(z)
    P = ModulePres.quotient_ring(R, zs)
    P.meta["forms"] = forms
    P.meta["example"] = "degabc"
    return P


def bourbaki_bv(rng: random.Random, d: int, n: int, max_degree: int = 2, p: int = 32003,
                budget: int = 100) -> ModulePres:
    """Random 0 -> R^n -> R^(n+d-1) -> A -> 0 with m-primary maximal minors."""
    R = Ring(d, p)
    for attempt in range(1, budget + 1):
        degs = [rng.randint(1, max_degree) for _ in range(n)]
        cols = [[random_form(rng, R, a) for _ in range(n + d - 1)] for a in degs]
        P = ModulePres.from_columns(R, [0] * (n + d - 1), cols)
        I = minors_ideal(P.matrix, n)
        gens = [g[0] for g in I.generators]
        if gens and krull_dim(ModulePres.quotient_ring(R, gens)) <= 0:
            P.meta.update({"example": "bourbaki_bv", "n": n, "attempts": attempt})
            return P
    raise BudgetExceeded(f"no m-primary instance in {budget} attempts")


def named_example(name: str, **params):
    if name == "cautionary2x2":
        return cautionary2x2(int(params.get("n", 1)), int(params.get("p", 32003)))
    if name == "maximal_ideal":
        return maximal_ideal(int(params.get("d", 2)), int(params.get("p", 32003)))
    if name == "degabc":
        forms = params.get("forms")
        if forms is None:
            R = Ring(2, int(params.get("p", 32003)), ("x", "y"))
            x, y = R.gens()
            forms = [x, y, x + y]
        return degabc(forms)
    if name == "bourbaki_bv":
        rng = random.Random(int(params.get("seed", 0)))
        return bourbaki_bv(rng, int(params.get("d", 2)), int(params.get("n", 1)),
                           int(params.get("max_degree", 2)), int(params.get("p", 32003)),
                           int(params.get("budget", 100)))
    raise KeyError(f"unknown example {name!r}")


# --- random corpora ------------------------------------------------------------------

def random_form(rng: random.Random, R: Ring, degree: int, density_percent: int = 100) -> Poly:
    """Random form with uniform coefficients, each monomial kept with the
    given probability; nonzero unless degree < 0."""
    if degree < 0:
        return R.zero()
    monos = R.monomials(degree)
    while True:
        terms = {}
        for m in monos:
            if density_percent >= 100 or rng.randrange(100) < density_percent:
                c = rng.randrange(R.char)
                if c:
                    terms[m] = c
        if terms:
            return Poly(R, terms)


@dataclass(frozen=True)
class CorpusSpec:
    seed: int
    count: int
    d: int = 2
    kind: str = "general"
    max_rank: int = 3
    max_degree: int = 2
    p: int = 32003
    min_depth: int = 0
    budget: int = 100
    density_percent: int = 100

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown corpus kind {self.kind!r}")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @classmethod
    def from_dict(cls, data: dict) -> "CorpusSpec":
        fields = {k: data[k] for k in cls.__dataclass_fields__ if k in data}
        return cls(**fields)

    def to_dict(self) -> dict:
        return asdict(self)


def _general(rng, R, spec):
    r = rng.randint(1, spec.max_rank)
    c = rng.randint(1, spec.max_rank)
    row_twists = [rng.randint(0, 1) for _ in range(r)]
    top = max(row_twists)
    cols = []
    for _ in range(c):
        a = top + rng.randint(1, spec.max_degree)
        cols.append([random_form(rng, R, a - t, spec.density_percent) if a - t <= spec.max_degree else R.zero()
                     for t in row_twists])
    return ModulePres.from_columns(R, row_twists, cols)


def _torsionfree(rng, R, spec):
    """Image of a random map G -> R^r, presented as G / ker."""
    r = rng.randint(1, max(1, spec.max_rank - 1))
    c = rng.randint(r + 1, spec.max_rank + 1)
    degs = [rng.randint(1, spec.max_degree) for _ in range(c)]
    cols = [[random_form(rng, R, a, spec.density_percent) for _ in range(r)] for a in degs]
    image = Submodule.from_polys(GradedFreeModule(R, (0,) * r), cols)
    K = syzygies(image)
    return ModulePres(K.as_matrix())


def _square(rng, R, spec, zero_rows: bool):
    r = rng.randint(1, spec.max_rank)
    row_twists = [0] * r if zero_rows else [rng.randint(0, 1) for _ in range(r)]
    top = max(row_twists)
    cols = []
    for _ in range(r):
        a = top + rng.randint(1, spec.max_degree)
        cols.append([random_form(rng, R, a - t, spec.density_percent) for t in row_twists])
    P = ModulePres.from_columns(R, row_twists, cols)
    det = determinant(R, [list(row) for row in P.matrix.entries])
    return P if det else None


def random_module(spec: CorpusSpec) -> list[ModulePres]:
    """Deterministic corpus: the same CorpusSpec always yields the same modules."""
    rng = random.Random(spec.seed)
    R = Ring(spec.d, spec.p)
    out = []
    for idx in range(spec.count):
        for attempt in range(1, spec.budget + 1):
            if spec.kind == "general":
                P = _general(rng, R, spec)
            elif spec.kind == "torsionfree":
                P = _torsionfree(rng, R, spec)
            elif spec.kind == "vector_bundle_bv":
                n = rng.randint(1, spec.max_rank)
                P = bourbaki_bv(rng, spec.d, n, spec.max_degree, spec.p, spec.budget)
            elif spec.kind == "dim1_square":
                P = _square(rng, R, spec, zero_rows=False)
            else:
                P = _square(rng, R, spec, zero_rows=True)
            if P is None:
                continue
            Q = minimalize(P)
            if Q.matrix.target.rank == 0:
                continue
            if spec.min_depth and basic_invariants(Q).depth < spec.min_depth:
                continue
            Q.meta.update(P.meta)
            Q.meta.update({"seed": spec.seed, "index": idx, "kind": spec.kind, "attempts": attempt})
            if attempt > 1:
                log.debug("corpus item %d drawn after %d attempts", idx, attempt)
            out.append(Q)
            break
        else:
            raise BudgetExceeded(f"item {idx}: no valid {spec.kind} module in {spec.budget} attempts")
    return out


def load_corpus(data: dict):
    """{"seed":..., "count":..., ..., "pair_with": {...}} -> CorpusItems."""
    from .bounds import CorpusItem

    if not data:
        return [], {"seed": None, "p": 32003, "variables": []}
    spec = CorpusSpec.from_dict(data)
    mods = random_module(spec)
    partners = None
    if data.get("pair_with"):
        pspec = CorpusSpec.from_dict(data["pair_with"])
        if pspec.d != spec.d or pspec.p != spec.p:
            raise ValueError("paired corpora must share the ring")
        partners = random_module(pspec)
    items = []
    for i, A in enumerate(mods):
        B = partners[i % len(partners)] if partners else None
        items.append(CorpusItem(f"{spec.kind}-{spec.seed}-{i}", A, B))
    meta = {"seed": spec.seed, "p": spec.p, "variables": list(Ring(spec.d, spec.p).names), "kind": spec.kind}
    return items, meta
