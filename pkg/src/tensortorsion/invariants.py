"""Numerical invariants of graded modules: Hilbert series, multiplicity,
Betti data, local cohomology lengths and the homological degree."""

from __future__ import annotations

import itertools
import json
from dataclasses import asdict, dataclass
from math import comb
from typing import Sequence

from .algebra import GradedMatrix, Poly, Ring
from .groebner import Submodule, hilbert_numerator, standard_monomial_count
from .homological import (
    ModulePres,
    dual_and_bidual,
    ext_module,
    finite_support_part,
    free_resolution,
    minimalize,
)


class InfiniteLengthError(ValueError):
    """A length was requested for a module of positive dimension."""


@dataclass(frozen=True)
class HilbertSeries:
    """HS(M) = numerator / (1-t)^nvars = reduced / (1-t)^dim.

    Polynomials are stored as {exponent: coefficient}; exponents may be
    negative when generators sit in negative degrees."""

    numerator: dict
    nvars: int
    reduced: dict
    dim: int  # -1 for the zero module

    @property
    def degree(self) -> int:
        return sum(self.reduced.values())

    def value(self, t: int) -> int:
        """Coefficient of t^k in the power series expansion."""
        total = 0
        s = self.dim
        for e, c in self.reduced.items():
            k = t - e
            if s <= 0:
                total += c if k == 0 else 0
            elif k >= 0:
                total += c * comb(k + s - 1, s - 1)
        return total


def _divide_one_minus_t(poly: dict) -> dict:
    """Exact division of a Laurent polynomial by (1 - t)."""
    if not poly:
        return {}
    lo, hi = min(poly), max(poly)
    out = {}
    acc = 0
    for e in range(lo, hi + 1):
        acc += poly.get(e, 0)
        if acc:
            out[e] = acc
    return out


def hilbert_series(P: ModulePres) -> HilbertSeries:
    P = minimalize(P)
    if "hs" in P._cache:
        return P._cache["hs"]
    ring = P.ring
    if P.matrix.target.rank == 0:
        hs = HilbertSeries({}, ring.nvars, {}, -1)
    else:
        num = {e: c for e, c in hilbert_numerator(P.groebner().lead_term_module()).items() if c}
        red = dict(num)
        s = ring.nvars
        while s > 0 and red and sum(red.values()) == 0:
            red = _divide_one_minus_t(red)
            s -= 1
        if not red:
            hs = HilbertSeries(num, ring.nvars, {}, -1)
        else:
            hs = HilbertSeries(num, ring.nvars, red, s)
    P._cache["hs"] = hs
    return hs


def hilbert_function(P: ModulePres, t: int) -> int:
    """dim_k M_t from the lead terms of a Groebner basis."""
    P = minimalize(P)
    if P.matrix.target.rank == 0:
        return 0
    return standard_monomial_count(P.groebner().lead_term_module(), t)


def krull_dim(P: ModulePres) -> int:
    return hilbert_series(P).dim


def multiplicity(P: ModulePres) -> int:
    """deg(M); the length for finite-length modules and 0 for M = 0."""
    return hilbert_series(P).degree


def length(P: ModulePres) -> int:
    hs = hilbert_series(P)
    if hs.dim > 0:
        raise InfiniteLengthError(f"module has dimension {hs.dim}")
    return hs.degree


@dataclass(frozen=True)
class BasicInvariants:
    deg: int
    nu: int
    alpha: int
    dim: int
    depth: int
    pd: int
    reg: int | None


def basic_invariants(P: ModulePres) -> BasicInvariants:
    P = minimalize(P)
    ring = P.ring
    res, bt = free_resolution(P)
    if P.matrix.target.rank == 0:
        return BasicInvariants(0, 0, 0, 0, 0, 0, None)
    hs = hilbert_series(P)
    pd = res.length
    return BasicInvariants(
        deg=hs.degree,
        nu=P.matrix.target.rank,
        alpha=max(P.twists),
        dim=hs.dim,
        depth=ring.nvars - pd,
        pd=pd,
        reg=bt.regularity,
    )


def ext_lengths(P: ModulePres) -> list[int | None]:
    """lambda(Ext^i(M,R)) for i = 0..d, None where the module is infinite."""
    out = []
    for i in range(P.ring.nvars + 1):
        hs = hilbert_series(ext_module(P, i))
        out.append(hs.degree if hs.dim <= 0 else None)
    return out


def h0_by_saturation(P: ModulePres) -> int:
    return length(finite_support_part(P).finite_part)


def local_cohomology_lengths(P: ModulePres, indices: Sequence[int] | None = None) -> list[int]:
    """h_i = lambda(Ext^{d-i}(M,R)); h_0 is cross-checked against the
    saturation computation of the finite-support part."""
    d = P.ring.nvars
    idx = list(range(d)) if indices is None else list(indices)
    out = []
    for i in idx:
        if not 0 <= i < d:
            raise ValueError(f"local cohomology index {i} outside 0..{d - 1}")
        E = ext_module(P, d - i)
        hs = hilbert_series(E)
        if hs.dim > 0:
            raise InfiniteLengthError(f"h_{i} is infinite: Ext^{d - i} has dimension {hs.dim}")
        out.append(hs.degree)
        if i == 0:
            sat = h0_by_saturation(P)
            if sat != hs.degree:
                raise AssertionError(f"h0 mismatch: Ext gives {hs.degree}, saturation gives {sat}")
    return out


def h0(P: ModulePres) -> int:
    return local_cohomology_lengths(P, [0])[0]


def hdeg(P: ModulePres) -> int:
    """Homological degree, by recursion over Ext modules."""
    P = minimalize(P)
    if "hdeg" in P._cache:
        return P._cache["hdeg"]
    hs = hilbert_series(P)
    dm = hs.dim
    if dm <= 0:
        val = max(hs.degree, 0)
    else:
        r = P.ring.nvars
        val = hs.degree
        terms = {}
        for i in range(r - dm + 1, r + 1):
            w = comb(dm - 1, i - r + dm - 1)
            if w:
                terms[i] = w * hdeg(ext_module(P, i))
        val += sum(terms.values())
        if dm == r:
            compact = hs.degree + sum(comb(r - 1, i - 1) * hdeg(ext_module(P, i)) for i in range(1, r + 1))
            if compact != val:
                raise AssertionError("hdeg window forms disagree")
    P._cache["hdeg"] = val
    return val


def minors_ideal(M: GradedMatrix, k: int) -> Submodule:
    """Ideal of k x k minors."""
    ring = M.ring
    rows, cols = M.shape
    if k < 0 or k > min(rows, cols):
        raise ValueError(f"minor size {k} exceeds the matrix shape {M.shape}")
    if k == 0:
        return Submodule.ideal(ring, [ring.one()])
    gens = []
    for rsel in itertools.combinations(range(rows), k):
        for csel in itertools.combinations(range(cols), k):
            sub = [[M.entries[i][j] for j in csel] for i in rsel]
            det = determinant(ring, sub)
            if det and det.is_homogeneous():
                gens.append(det)
            elif det:
                raise ValueError("minor is not homogeneous")
    return Submodule.ideal(ring, gens)


def determinant(ring: Ring, rows: list[list[Poly]]) -> Poly:
    """Laplace expansion along the first row."""
    n = len(rows)
    if n == 0:
        return ring.one()
    if n == 1:
        return rows[0][0]
    total = ring.zero()
    for j in range(n):
        a = rows[0][j]
        if not a:
            continue
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        term = a * determinant(ring, minor)
        total = total + term if j % 2 == 0 else total - term
    return total


@dataclass(frozen=True)
class Predicates:
    is_torsionfree: bool
    is_vector_bundle: bool
    is_cm: bool
    is_equigenerated_deg0: bool


def is_torsionfree(P: ModulePres) -> bool:
    return dual_and_bidual(P).torsion.matrix.target.rank == 0


def is_vector_bundle(P: ModulePres) -> bool:
    return all(krull_dim(ext_module(P, i)) <= 0 for i in range(1, P.ring.nvars + 1))


def is_cohen_macaulay(P: ModulePres) -> bool:
    b = basic_invariants(P)
    return b.nu == 0 or b.depth == b.dim


def predicates(P: ModulePres) -> Predicates:
    P = minimalize(P)
    return Predicates(
        is_torsionfree=is_torsionfree(P),
        is_vector_bundle=is_vector_bundle(P),
        is_cm=is_cohen_macaulay(P),
        is_equigenerated_deg0=all(a == 0 for a in P.twists),
    )


@dataclass(frozen=True)
class InvariantSet:
    deg: int
    nu: int
    alpha: int
    dim: int
    depth: int
    pd: int
    reg: int | None
    h: tuple  # h_0..h_{d-1}; None where infinite
    hdeg: int
    betti: tuple

    def to_json(self) -> str:
        d = asdict(self)
        d["h"] = list(self.h)
        d["betti"] = list(self.betti)
        return json.dumps(d, sort_keys=True)


def invariant_set(P: ModulePres) -> InvariantSet:
    P = minimalize(P)
    d = P.ring.nvars
    b = basic_invariants(P)
    _, bt = free_resolution(P)
    if b.nu == 0:
        return InvariantSet(0, 0, 0, 0, 0, 0, None, tuple([0] * d), 0, ())
    ext = ext_lengths(P)
    hs = tuple(ext[d - i] for i in range(d))
    if hs[0] != h0_by_saturation(P):
        raise AssertionError("h0 mismatch between Ext and saturation")
    return InvariantSet(b.deg, b.nu, b.alpha, b.dim, b.depth, b.pd, b.reg, hs, hdeg(P), bt.betti)
