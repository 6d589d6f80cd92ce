"""Torsion bounds as guarded, auditable predicates, plus the tensor-power
torsion probe and an aggregate verification runner."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Sequence

from .algebra import Poly, Ring
from .groebner import Submodule
from .homological import (
    ModulePres,
    dual_and_bidual,
    finite_support_part,
    free_resolution,
    minimalize,
    syzygy_module,
    tensor_pres,
    tor_module,
    torsion_free_quotient,
)
from .invariants import (
    basic_invariants,
    determinant,
    ext_module,
    hdeg,
    hilbert_series,
    is_cohen_macaulay,
    is_torsionfree,
    is_vector_bundle,
    krull_dim,
    length,
    local_cohomology_lengths,
    minors_ideal,
    multiplicity,
)

PROVEN, CONDITIONAL, EXPLORATORY = "proven", "conditional", "exploratory"


def serialize_number(v):
    """Exact numbers for JSON: ints stay ints, other rationals become "p/q"."""
    if v is None or isinstance(v, bool):
        return v
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return v


@dataclass
class Part:
    """A secondary comparison carried by a report."""

    name: str
    lhs: object
    rhs: object
    holds: bool
    kind: str = "inequality"
    gating: bool = True
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "lhs": serialize_number(self.lhs),
            "rhs": serialize_number(self.rhs),
            "holds": self.holds,
            "kind": self.kind,
            "gating": self.gating,
            "note": self.note,
        }


@dataclass
class BoundReport:
    bound_id: str
    applicable: bool
    reason: str
    tier: str
    lhs: object = None
    rhs: object = None
    holds: bool | None = None
    strict: bool = False
    kind: str = "inequality"
    parts: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)

    @property
    def slack(self):
        if self.lhs is None or self.rhs is None:
            return None
        return self.rhs - self.lhs

    @property
    def violated(self) -> bool:
        """Main comparison or any gating part fails on an applicable instance."""
        if not self.applicable:
            return False
        return self.holds is False or any(p.gating and not p.holds for p in self.parts)

    def to_dict(self) -> dict:
        return {
            "bound_id": self.bound_id,
            "applicable": self.applicable,
            "reason": self.reason,
            "tier": self.tier,
            "lhs": serialize_number(self.lhs),
            "rhs": serialize_number(self.rhs),
            "holds": self.holds,
            "violated": self.violated,
            "slack": serialize_number(self.slack),
            "strict": self.strict,
            "kind": self.kind,
            "parts": [p.to_dict() for p in self.parts],
            "detail": {k: serialize_number(v) for k, v in sorted(self.detail.items())},
        }


def _compare(lhs, rhs, strict: bool) -> bool:
    return lhs < rhs if strict else lhs <= rhs


def _na(bound_id: str, reason: str) -> BoundReport:
    return BoundReport(bound_id, False, reason, TIERS[bound_id], strict=bound_id in STRICT,
                       kind="identity" if bound_id in IDENTITIES else "inequality")


def _report(bound_id: str, lhs, rhs, parts=(), detail=None) -> BoundReport:
    strict = bound_id in STRICT
    kind = "identity" if bound_id in IDENTITIES else "inequality"
    holds = lhs == rhs if kind == "identity" else _compare(lhs, rhs, strict)
    return BoundReport(bound_id, True, "all guards satisfied", TIERS[bound_id], lhs, rhs, holds, strict, kind,
                       list(parts), dict(detail or {}))


# --- shared quantities --------------------------------------------------------

def tensor_of(A: ModulePres, B: ModulePres) -> ModulePres:
    """Minimalized A (x) B, memoized on A for the lifetime of A."""
    key = ("tensor", id(B))
    hit = A._cache.get(key)
    if hit is not None and hit[0] is B:
        return hit[1]
    T = minimalize(tensor_pres(minimalize(A), minimalize(B)))
    A._cache[key] = (B, T)
    return T


def h0(P: ModulePres) -> int:
    """Length of the finite-support part, via saturation."""
    return length(finite_support_part(P).finite_part)


def h0_tensor(A: ModulePres, B: ModulePres) -> int:
    return h0(tensor_of(A, B))


def nu(P: ModulePres) -> int:
    return minimalize(P).matrix.target.rank


def reg(P: ModulePres) -> int | None:
    return basic_invariants(P).reg


def beta1_of_residue_field(ring: Ring) -> int:
    """beta_1(k) = d, checked against the computed Koszul resolution."""
    k = ModulePres.quotient_ring(ring, ring.gens())
    _, bt = free_resolution(k)
    if bt.beta(1) != ring.nvars:
        raise AssertionError("resolution of the residue field has unexpected beta_1")
    return bt.beta(1)


# --- individual bounds ----------------------------------------------------------

def _amoda0(A, B):
    if B is None:
        return _na("AmodA0", "second module required")
    fa, fb = finite_support_part(A), finite_support_part(B)
    lhs = h0_tensor(A, B)
    bar = h0_tensor(fa.quotient, fb.quotient)
    rhs = h0(A) * nu(B) + h0(B) * nu(A) + bar
    T0 = finite_support_part(tensor_of(A, B)).finite_part
    nu_rhs = nu(fa.finite_part) * nu(B) + nu(A) * nu(fb.finite_part) + nu(
        finite_support_part(tensor_of(fa.quotient, fb.quotient)).finite_part)
    parts = [Part("generators_of_finite_support_part", nu(T0), nu_rhs, nu(T0) <= nu_rhs)]
    return _report("AmodA0", lhs, rhs, parts, {"h0_bar_tensor": bar})


def _degandbetti(A, B):
    P = minimalize(A)
    if nu(P) == 0:
        return _na("degandbetti", "zero module")
    d = P.ring.nvars
    h = hdeg(P)
    _, bt = free_resolution(P)
    parts = []
    best = None
    for i in range(d + 1):
        lhs, rhs = bt.beta(i), h * comb(d, i)
        parts.append(Part(f"beta_{i}", lhs, rhs, lhs <= rhs))
        if best is None or rhs - lhs < best[2] - best[1]:
            best = (i, lhs, rhs)
    i, lhs, rhs = best
    return _report("degandbetti", lhs, rhs, parts, {"tightest_index": i, "hdeg": h})


def _nagel(A, B):
    P = minimalize(A)
    if nu(P) == 0:
        return _na("nagel", "zero module")
    b = basic_invariants(P)
    h = hdeg(P)
    return _report("nagel", b.reg, h + b.alpha, (), {"hdeg": h, "alpha": b.alpha})


def _hdegsyz(A, B):
    P = minimalize(A)
    d = P.ring.nvars
    if nu(P) == 0:
        return _na("hdegsyz", "zero module")
    if krull_dim(P) != d:
        return _na("hdegsyz", "dim A = d")
    L = syzygy_module(P)
    degL = multiplicity(L)
    degA = multiplicity(P)
    deg_ring = 1
    rhs = nu(P) * deg_ring - degA
    hA = hdeg(P)
    hL = hdeg(L)
    c = hA - degA - hdeg(ext_module(P, 1))
    x = hL - degL
    parts = []
    if d >= 2:
        parts.append(Part("lower_chain", c, (d - 1) * x, c <= (d - 1) * x,
                          note="c/(d-1) <= hdeg(L) - deg(L), scaled by d-1"))
        parts.append(Part("upper_chain", x, (d - 1) * c, x <= (d - 1) * c))
    return _report("hdegsyz", degL, rhs, parts, {"c": c, "hdeg_L": hL, "deg_L": degL})


def _tor1_syzygy(A, B):
    if B is None:
        return _na("tor1_syzygy", "second module required")
    P = minimalize(A)
    d = P.ring.nvars
    L = syzygy_module(P)
    lhs = h0(tor_module(P, B, 1))
    rhs = h0_tensor(L, B) if nu(L) else 0
    parts = []
    for i in range(2, d + 1):
        left = hilbert_series(tor_module(P, B, i))
        right = hilbert_series(tor_module(L, B, i - 1)) if nu(L) else hilbert_series(ModulePres.zero(P.ring))
        same = (left.reduced, left.dim) == (right.reduced, right.dim)
        parts.append(Part(f"shift_tor_{i}", str(sorted(left.reduced.items())), str(sorted(right.reduced.items())),
                          same, kind="identity"))
    return _report("tor1_syzygy", lhs, rhs, parts)


def _vbbetahi(A, B):
    if B is None:
        return _na("vbbetahi", "second module required")
    P = minimalize(A)
    d = P.ring.nvars
    _, btB = free_resolution(B)
    if free_resolution(B)[0].length >= d:
        return _na("vbbetahi", "pd B < d")
    if not is_vector_bundle(P):
        return _na("vbbetahi", "A is a vector bundle")
    hs = local_cohomology_lengths(P)
    rhs = sum(btB.beta(i) * hs[i] for i in range(d))
    return _report("vbbetahi", h0_tensor(P, B), rhs, (), {"h": str(hs)})


def _h0vb(A, B):
    if B is None:
        return _na("h0vb", "second module required")
    P = minimalize(A)
    if not is_vector_bundle(P):
        return _na("h0vb", "A is a vector bundle")
    d = P.ring.nvars
    ha, hb = hdeg(P), hdeg(B)
    return _report("h0vb", h0_tensor(P, B), d * ha * hb, (), {"hdeg_A": ha, "hdeg_B": hb, "h0_B": h0(B)})


def bourbaki_shape(P: ModulePres) -> tuple[bool, str, int]:
    """(ok, failed guard, n) for a presentation 0 -> R^n -> R^(n+d-1) -> A -> 0
    with m-primary ideal of maximal minors."""
    P = minimalize(P)
    d = P.ring.nvars
    n = P.matrix.source.rank
    if n == 0:
        return False, "presentation has relations", 0
    if P.matrix.target.rank != n + d - 1:
        return False, "presentation of shape (n+d-1) x n", n
    res, _ = free_resolution(P)
    if res.length != 1:
        return False, "presentation is injective", n
    I = minors_ideal(P.matrix, n)
    if krull_dim(ModulePres.quotient_ring(P.ring, [g[0] for g in I.generators])) > 0:
        return False, "ideal of maximal minors is m-primary", n
    return True, "", n


def _bv_hdeg(A, B):
    P = minimalize(A)
    ok, why, n = bourbaki_shape(P)
    if not ok:
        return _na("bv_hdeg", why)
    d = P.ring.nvars
    I = minors_ideal(P.matrix, n)
    lam = length(ModulePres.quotient_ring(P.ring, [g[0] for g in I.generators]))
    degA = multiplicity(P)
    deg_ring = 1
    lhs = hdeg(P)
    rhs = (d - 1) * deg_ring + lam
    ext1 = length(ext_module(P, 1))
    parts = [
        Part("ext1_length_formula", ext1, lam, ext1 == lam, kind="identity"),
        Part("literal_rank_times_deg", lhs, (d - 1) * degA + lam, lhs == (d - 1) * degA + lam, kind="identity",
             gating=False, note="(d-1)*deg(A) + lambda; agrees with the main identity only when deg(A) = deg(R)"),
    ]
    return _report("bv_hdeg", lhs, rhs, parts, {"deg_A": degA, "lambda_minors": lam, "n": n})


def _dual_parts(P: ModulePres):
    D = dual_and_bidual(P)
    return D.bidual, D.cokernel


def _tor1_cb(A, B):
    if B is None:
        return _na("tor1_CB", "second module required")
    P = minimalize(A)
    if nu(P) == 0:
        return _na("tor1_CB", "zero module")
    if not is_torsionfree(P):
        return _na("tor1_CB", "A is torsionfree")
    bidual, C = _dual_parts(P)
    if krull_dim(C) > 0:
        return _na("tor1_CB", "C = A**/A has finite length")
    b1 = beta1_of_residue_field(P.ring)
    lhs = length(tor_module(C, B, 1))
    hC = hdeg(C)
    rhs = b1 * hC * nu(B)
    h_ab = h0_tensor(P, B)
    h_bb = h0_tensor(bidual, B) if nu(bidual) else 0
    parts = [Part("tensor_split", h_ab, h_bb + lhs, h_ab <= h_bb + lhs)]
    return _report("tor1_CB", lhs, rhs, parts, {"beta1_k": b1, "hdeg_C": hC})


def annihilator_is_primary(P: ModulePres) -> bool:
    """For a square presentation over k[x,y]: rad(ann A) = rad(det phi), so
    ann A is primary iff det phi has a single irreducible factor up to units."""
    from sympy import Poly as SymPoly, symbols

    P = minimalize(P)
    ring = P.ring
    if ring.nvars != 2 or P.matrix.source.rank != P.matrix.target.rank:
        raise ValueError("primary test implemented for square presentations over two variables")
    rows = [list(r) for r in P.matrix.entries]
    det = determinant(ring, rows)
    if not det or not det.is_homogeneous():
        raise ValueError("determinant must be a nonzero form")
    total = det.degree
    # dehomogenize at the last variable: f(x, y) = y^k * g(x/y)
    coeffs: dict[int, int] = {}
    for c, e in det.terms:
        coeffs[e[0]] = (coeffs.get(e[0], 0) + c) % ring.char
    top = max(coeffs)
    factors = 0
    if total - top > 0:
        factors += 1
    if top > 0:
        t = symbols("t")
        g = SymPoly([coeffs.get(k, 0) for k in range(top, -1, -1)], t, modulus=ring.char)
        factors += len(g.factor_list()[1])
    return factors == 1


def _dim2cm(A, B):
    P = minimalize(A)
    if P.ring.nvars != 2:
        return _na("dim2cm", "d = 2")
    if nu(P) == 0 or krull_dim(P) != 1:
        return _na("dim2cm", "dim A = 1")
    if not is_cohen_macaulay(P):
        return _na("dim2cm", "A is Cohen-Macaulay")
    h = hdeg(P)
    lhs = h0_tensor(P, P)
    parts = []
    primary = annihilator_is_primary(P)
    if primary:
        parts.append(Part("primary_annihilator_branch", lhs, 2 * h ** 4, lhs <= 2 * h ** 4, gating=False,
                          note="hypothesis of the conditional statement"))
    return _report("dim2cm", lhs, 3 * h ** 4, parts, {"hdeg": h, "ann_primary": primary})


def _degabc(A, B):
    forms = A.meta.get("forms")
    if not forms:
        return _na("degabc", "forms recorded in module metadata")
    ring = A.ring
    n = len(forms)
    if n < 2:
        return _na("degabc", "at least two forms")
    for i in range(n):
        for j in range(i + 1, n):
            if krull_dim(ModulePres.quotient_ring(ring, [forms[i], forms[j]])) != ring.nvars - 2:
                return _na("degabc", "every pair of forms is a regular sequence")
    lhs = multiplicity(A)
    degs = [multiplicity(ModulePres.quotient_ring(ring, [f])) for f in forms]
    D = multiplicity(ModulePres.quotient_ring(ring, [_product(ring, forms)]))
    pairwise = sum(degs[i] * degs[j] for i in range(n) for j in range(i + 1, n))
    rhs = Fraction(D * D - n, 2)
    parts = [Part("pairwise_product_identity", lhs, pairwise, lhs == pairwise, kind="identity")]
    return _report("degabc", lhs, rhs, parts, {"deg_product": D, "n": n})


def _product(ring: Ring, forms: Sequence[Poly]) -> Poly:
    out = ring.one()
    for f in forms:
        out = out * f
    return out


def _h0dim3(A, B):
    if B is None:
        return _na("h0dim3", "second module required")
    P = minimalize(A)
    if P.ring.nvars != 3:
        return _na("h0dim3", "d = 3")
    if not (is_torsionfree(P) and is_torsionfree(B)):
        return _na("h0dim3", "A and B torsionfree")
    ha, hb = hdeg(P), hdeg(B)
    return _report("h0dim3", h0_tensor(P, B), 4 * ha * hb, (), {"hdeg_A": ha, "hdeg_B": hb})


def _addiofreg(A, B):
    P = minimalize(A)
    T = dual_and_bidual(P).torsion
    Q = torsion_free_quotient(P)
    if nu(T) == 0:
        return _na("addiofreg", "torsion submodule A0 is nonzero")
    if nu(Q) == 0:
        return _na("addiofreg", "torsionfree quotient A' is nonzero")
    rA, rT, rQ = reg(P), reg(T), reg(Q)
    parts = [
        Part("sub_by_others", rT, rA + rQ, rT <= rA + rQ, gating=False,
             note="0 -> m -> R -> k -> 0 shows this form fails in general"),
        Part("quotient_by_others", rQ, rT + rA, rQ <= rT + rA, gating=False),
        Part("torsion_reg_at_most_reg", rT, rA, rT <= rA, gating=False),
    ]
    d = P.ring.nvars
    if d == 2 and krull_dim(P) == 2 and h0(P) == 0:
        lhs_h = hdeg(P)
        rhs_h = multiplicity(T) + hdeg(Q)
        parts.append(Part("torsion_sequence_hdeg", lhs_h, rhs_h, lhs_h == rhs_h, kind="identity"))
    return _report("addiofreg", rA, rT + rQ, parts, {"reg_A0": rT, "reg_A_prime": rQ})


def _grdim2(A, B):
    P = minimalize(A)
    if P.ring.nvars != 2:
        return _na("grdim2", "d = 2")
    if nu(P) == 0 or krull_dim(P) != 1:
        return _na("grdim2", "dim A = 1")
    if any(a != 0 for a in P.twists):
        return _na("grdim2", "equigenerated in degree 0")
    r = nu(P)
    dg = multiplicity(P)
    rhs = r ** 4 * dg * (dg - 1)
    parts = [Part("sextic_comparison", rhs, dg ** 6, rhs < dg ** 6, gating=False)]
    return _report("grdim2", h0_tensor(P, P), rhs, parts, {"r": r, "deg": dg})


def _refl_additivity(A, B):
    P = minimalize(A)
    d = P.ring.nvars
    if d not in (2, 3):
        return _na("refl_additivity", "d in {2, 3}")
    if nu(P) == 0:
        return _na("refl_additivity", "zero module")
    if not is_torsionfree(P):
        return _na("refl_additivity", "A is torsionfree")
    if not is_vector_bundle(P):
        return _na("refl_additivity", "A is a vector bundle")
    bidual, C = _dual_parts(P)
    hA, hB, hC = hdeg(P), hdeg(bidual), hdeg(C)
    parts = [Part("unweighted", hA, hB + hC, hA == hB + hC, kind="identity", gating=False,
                  note="coincides with the main identity when d = 2")]
    return _report("refl_additivity", hA, hB + (d - 1) * hC, parts, {"hdeg_bidual": hB, "hdeg_C": hC})


BOUNDS: dict[str, Callable] = {
    "AmodA0": _amoda0,
    "degandbetti": _degandbetti,
    "nagel": _nagel,
    "hdegsyz": _hdegsyz,
    "tor1_syzygy": _tor1_syzygy,
    "vbbetahi": _vbbetahi,
    "h0vb": _h0vb,
    "bv_hdeg": _bv_hdeg,
    "tor1_CB": _tor1_cb,
    "dim2cm": _dim2cm,
    "degabc": _degabc,
    "h0dim3": _h0dim3,
    "addiofreg": _addiofreg,
    "grdim2": _grdim2,
    "refl_additivity": _refl_additivity,
}
TIERS = {k: PROVEN for k in BOUNDS}
TIERS.update({"dim2cm": CONDITIONAL, "grdim2": CONDITIONAL})
STRICT = {"nagel", "h0dim3"}
IDENTITIES = {"bv_hdeg", "refl_additivity"}
BINARY = {"AmodA0", "tor1_syzygy", "vbbetahi", "h0vb", "tor1_CB", "h0dim3"}


def evaluate_bound(bound_id: str, A: ModulePres, B: ModulePres | None = None) -> BoundReport:
    if bound_id not in BOUNDS:
        raise KeyError(f"unknown bound id {bound_id!r}")
    if B is not None:
        A.ring.check_same(B.ring)
    return BOUNDS[bound_id](A, B)


# --- tensor-power probe -----------------------------------------------------------

@dataclass
class ProbeReport:
    module_id: str
    e_found: int | None
    e_max: int
    budget_exceeded: bool = False
    torsion_lengths: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "module_id": self.module_id,
            "e_found": self.e_found,
            "e_max": self.e_max,
            "budget_exceeded": self.budget_exceeded,
            "tier": EXPLORATORY,
        }


def tensor_power_probe(M: ModulePres, e_max: int, module_id: str = "M", budget: int = 64) -> ProbeReport:
    """Smallest e <= e_max with torsion in M^(x)e; stops early if nu(M)^e
    exceeds ``budget``."""
    if e_max < 1:
        raise ValueError("e_max must be at least 1")
    P = minimalize(M)
    n = nu(P)
    power = P
    for e in range(1, e_max + 1):
        if n ** e > budget:
            return ProbeReport(module_id, None, e_max, budget_exceeded=True)
        if e > 1:
            power = minimalize(tensor_pres(power, P))
        if not is_torsionfree(power):
            return ProbeReport(module_id, e, e_max)
    return ProbeReport(module_id, None, e_max)


# --- aggregate runner ---------------------------------------------------------------

@dataclass
class CorpusItem:
    item_id: str
    A: ModulePres
    B: ModulePres | None = None


@dataclass
class SuiteResult:
    aggregate: dict
    reports: list
    metadata: dict

    @property
    def proven_violations(self) -> list:
        return [(i, r) for i, r in self.reports if r.tier == PROVEN and r.violated]

    def to_json(self) -> str:
        return json.dumps({"aggregate": self.aggregate, "metadata": self.metadata}, sort_keys=True)


def verify_suite(items: Iterable[CorpusItem], bound_ids: Sequence[str] | None = None,
                 tiers: Sequence[str] | None = None, metadata: dict | None = None) -> SuiteResult:
    ids = list(bound_ids) if bound_ids is not None else list(BOUNDS)
    if tiers is not None:
        ids = [b for b in ids if TIERS[b] in tiers]
    for b in ids:
        if b not in BOUNDS:
            raise KeyError(f"unknown bound id {b!r}")
    agg = {b: {"applicable": 0, "holds": 0, "violated": 0, "max_ratio": None} for b in ids}
    ratios: dict[str, Fraction] = {}
    reports = []
    for item in items:
        for b in ids:
            rep = evaluate_bound(b, item.A, item.B)
            reports.append((item.item_id, rep))
            if not rep.applicable:
                continue
            a = agg[b]
            a["applicable"] += 1
            if rep.violated:
                a["violated"] += 1
            else:
                a["holds"] += 1
            if isinstance(rep.lhs, (int, Fraction)) and isinstance(rep.rhs, (int, Fraction)) and rep.rhs > 0:
                q = Fraction(rep.lhs) / Fraction(rep.rhs)
                if b not in ratios or q > ratios[b]:
                    ratios[b] = q
    for b, q in ratios.items():
        agg[b]["max_ratio"] = serialize_number(q)
    meta = {"order": "grevlex/POT"}
    meta.update(metadata or {})
    return SuiteResult(agg, reports, meta)
