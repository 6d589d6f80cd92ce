"""Buchberger's algorithm for homogeneous submodules of graded free modules.

Module vectors are plain ``dict``s mapping packed terms (see ``algebra``) to
residues mod p.  Every computation here assumes homogeneous input; S-pairs are
processed degree by degree (normal strategy) with the Gebauer-Moeller
criteria, minus the product criterion which is unsound for modules.

Kernels, colons and subquotient relations all come from one primitive,
:func:`preimage`, which runs Buchberger on an augmented module with the
original components placed first in the position-over-term order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from heapq import heapify, heappop, heappush
from typing import Iterable, Sequence

from .algebra import FIELD_BITS, GradedFreeModule, GradedMatrix, Poly, Ring

_FMASK = (1 << FIELD_BITS) - 1

Vector = dict  # packed term -> coefficient


# --- low level helpers -----------------------------------------------------

def vector_degree(ring: Ring, twists: Sequence[int], v: Vector) -> int:
    t = next(iter(v))
    return ((t >> ring.deg_shift) & _FMASK) + twists[t >> ring.comp_shift]


def is_homogeneous_vector(ring: Ring, twists: Sequence[int], v: Vector) -> bool:
    ds, cs = ring.deg_shift, ring.comp_shift
    degs = {((t >> ds) & _FMASK) + twists[t >> cs] for t in v}
    return len(degs) <= 1


def lead_term(ring: Ring, v: Vector) -> int:
    flip = ring.flip
    return min(v, key=lambda t: t ^ flip)


def shift_components(ring: Ring, v: Vector, offset: int) -> Vector:
    """Move every term of ``v`` by ``offset`` component slots."""
    s = ring.comp_shift
    delta = offset << s
    return {t + delta: c for t, c in v.items()}


def scale_vector(ring: Ring, v: Vector, c: int) -> Vector:
    p = ring.char
    return {t: a * c % p for t, a in v.items() if a * c % p}


def add_vectors(ring: Ring, a: Vector, b: Vector, c: int = 1) -> Vector:
    """a + c*b"""
    p = ring.char
    out = dict(a)
    for t, x in b.items():
        v = (out.get(t, 0) + c * x) % p
        if v:
            out[t] = v
        else:
            out.pop(t, None)
    return out


def mul_poly_vector(ring: Ring, f: Poly, v: Vector) -> Vector:
    p = ring.char
    out: dict[int, int] = {}
    for m, a in f._terms.items():
        for t, b in v.items():
            u = t + m
            out[u] = (out.get(u, 0) + a * b) % p
    return {t: c for t, c in out.items() if c}


def _make_reducer(ring: Ring, nhead: int):
    """Full reduction of the head block (components < nhead) against ``table``."""
    p = ring.char
    flip = ring.flip
    shift = ring.comp_shift
    guard = ring.guard
    tail_start = nhead << shift

    def reduce(vec: Vector, table: dict, full: bool = True) -> Vector:
        work = dict(vec)
        heap = [t ^ flip for t in work]
        heapify(heap)
        out: dict[int, int] = {}
        while heap:
            t = heappop(heap) ^ flip
            c = work.pop(t, 0)
            if not c:
                continue
            if t >= tail_start:
                out[t] = c
                out.update(work)
                break
            hit = None
            for lm, lead, elem in table.get(t >> shift, ()):
                if (((t | guard) - lm) & guard) == guard:
                    hit = (lead, elem)
                    break
            if hit is None:
                out[t] = c
                if not full:
                    out.update(work)
                    break
                continue
            lead, elem = hit
            q = t - lead
            for s, a in elem.items():
                if s == lead:
                    continue
                u = s + q
                old = work.get(u)
                if old is None:
                    work[u] = (-c * a) % p
                    heappush(heap, u ^ flip)
                else:
                    nv = (old - c * a) % p
                    if nv:
                        work[u] = nv
                    else:
                        del work[u]
        return out

    return reduce


@dataclass
class _EngineResult:
    basis: list          # monic head vectors, insertion order
    leads: list
    tails: list          # vectors whose head block reduced to zero
    minimal: list        # indices of inputs that were minimal generators


def _engine(ring: Ring, twists: Sequence[int], vectors: Sequence[Vector], nhead: int | None = None,
            track_minimal: bool = False) -> _EngineResult:
    p = ring.char
    flip = ring.flip
    shift = ring.comp_shift
    dshift = ring.deg_shift
    guard = ring.guard
    twists = tuple(twists)
    if nhead is None:
        nhead = len(twists)
    tail_start = nhead << shift
    reduce = _make_reducer(ring, nhead)
    lcm = ring.lcm

    basis: list = []
    leads: list = []
    table: dict = {}
    tails: list = []
    minimal: list = []
    pending: dict = {}
    comp_pairs: dict = {}

    inputs: dict = {}
    for idx, v in enumerate(vectors):
        if not v:
            continue
        inputs.setdefault(vector_degree(ring, twists, v), []).append((idx, v))

    def insert(v: Vector) -> bool:
        lead = min(v, key=lambda t: t ^ flip)
        if lead >= tail_start:
            tails.append(v)
            return False
        c = v[lead]
        if c != 1:
            inv = pow(c, p - 2, p)
            v = {t: a * inv % p for t, a in v.items()}
        idx = len(basis)
        comp = lead >> shift
        same = [(l, j) for j, l in enumerate(leads) if l >> shift == comp]
        mono_mask = ring.mono_mask
        for rec in comp_pairs.get(comp, ()):
            if rec[3]:
                L = rec[0]
                if (((L | guard) - (lead & mono_mask)) & guard) == guard \
                        and lcm(leads[rec[1]], lead) != L and lcm(leads[rec[2]], lead) != L:
                    rec[3] = False
        first_for_lcm: dict = {}
        for lj, j in same:
            L = lcm(lead, lj)
            if L not in first_for_lcm:
                first_for_lcm[L] = j
        cands = list(first_for_lcm)
        for L in cands:
            Lm = L & mono_mask
            redundant = False
            for L2 in cands:
                if L2 != L and (((Lm | guard) - (L2 & mono_mask)) & guard) == guard:
                    redundant = True
                    break
            if redundant:
                continue
            deg = ((L >> dshift) & _FMASK) + twists[comp]
            rec = [L, first_for_lcm[L], idx, True]
            pending.setdefault(deg, []).append(rec)
            comp_pairs.setdefault(comp, []).append(rec)
        basis.append(v)
        leads.append(lead)
        table.setdefault(comp, []).append((lead & mono_mask, lead, v))
        return True

    while pending or inputs:
        t = min(list(pending) + list(inputs))
        batch = [r for r in pending.pop(t, []) if r[3]]
        batch.sort(key=lambda r: (r[0] ^ flip, r[1], r[2]))
        for rec in batch:
            if not rec[3]:
                continue
            rec[3] = False
            L, i, j = rec[0], rec[1], rec[2]
            a, b = basis[i], basis[j]
            qa, qb = L - leads[i], L - leads[j]
            s: dict = {}
            for u, c in a.items():
                s[u + qa] = c
            for u, c in b.items():
                w = u + qb
                nv = (s.get(w, 0) - c) % p
                if nv:
                    s[w] = nv
                else:
                    s.pop(w, None)
            h = reduce(s, table)
            if h:
                insert(h)
        for idx, v in inputs.pop(t, []):
            h = reduce(v, table)
            if h and insert(h) and track_minimal:
                minimal.append(idx)
        for comp in list(comp_pairs):
            comp_pairs[comp] = [r for r in comp_pairs[comp] if r[3]]
    return _EngineResult(basis, leads, tails, minimal)


def _table_of(ring: Ring, basis: Sequence[Vector], leads: Sequence[int]) -> dict:
    shift = ring.comp_shift
    mask = ring.mono_mask
    table: dict = {}
    for v, lead in zip(basis, leads):
        table.setdefault(lead >> shift, []).append((lead & mask, lead, v))
    return table


def _interreduce(ring: Ring, twists, basis: Sequence[Vector], leads: Sequence[int]) -> tuple[list, list]:
    """Reduced basis from a minimal-lead Groebner basis, sorted by lead."""
    reduce = _make_reducer(ring, len(twists))
    table = _table_of(ring, basis, leads)
    out = []
    for v, lead in zip(basis, leads):
        rest = {t: c for t, c in v.items() if t != lead}
        r = reduce(rest, table)
        r[lead] = 1
        out.append((lead, r))
    flip = ring.flip
    out.sort(key=lambda x: x[0] ^ flip)
    return [v for _, v in out], [l for l, _ in out]


# --- public types ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Submodule:
    """Submodule of ``ambient`` generated by homogeneous vectors."""

    ambient: GradedFreeModule
    vectors: tuple = ()

    def __post_init__(self):
        ring = self.ambient.ring
        vecs = tuple(dict(v) for v in self.vectors if v)
        for k, v in enumerate(vecs):
            for t in v:
                if t >> ring.comp_shift >= self.ambient.rank:
                    raise ValueError(f"generator {k} has a component outside the ambient module")
            if not is_homogeneous_vector(ring, self.ambient.twists, v):
                raise ValueError(f"generator {k} is not homogeneous")
        object.__setattr__(self, "vectors", vecs)

    @property
    def ring(self) -> Ring:
        return self.ambient.ring

    @classmethod
    def from_polys(cls, ambient: GradedFreeModule, gens: Iterable[Sequence[Poly]]) -> "Submodule":
        shift = ambient.ring.comp_shift
        vecs = []
        for g in gens:
            if len(g) != ambient.rank:
                raise ValueError("generator length differs from ambient rank")
            v = {}
            for i, f in enumerate(g):
                ambient.ring.check_same(f.ring)
                for m, c in f._terms.items():
                    v[(i << shift) | m] = c
            vecs.append(v)
        return cls(ambient, tuple(vecs))

    @classmethod
    def ideal(cls, ring: Ring, gens: Iterable[Poly]) -> "Submodule":
        return cls.from_polys(GradedFreeModule(ring, (0,)), [[g] for g in gens])

    @classmethod
    def image(cls, M: GradedMatrix) -> "Submodule":
        return cls(M.target, tuple(M.column_vectors()))

    @property
    def generators(self) -> list[list[Poly]]:
        r = self.ring
        shift, mask = r.comp_shift, r.mono_mask
        out = []
        for v in self.vectors:
            comps = [dict() for _ in range(self.ambient.rank)]
            for t, c in v.items():
                comps[t >> shift][t & mask] = c
            out.append([Poly._raw(r, d) for d in comps])
        return out

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(vector_degree(self.ring, self.ambient.twists, v) for v in self.vectors)

    def as_matrix(self) -> GradedMatrix:
        src = GradedFreeModule(self.ring, self.degrees)
        return GradedMatrix.from_vectors(src, self.ambient, list(self.vectors))

    def is_zero(self) -> bool:
        return not self.vectors

    def __len__(self) -> int:
        return len(self.vectors)


@dataclass(frozen=True)
class LeadTermModule:
    """Monomial submodule: ``terms`` are (component, exponents) pairs."""

    ambient: GradedFreeModule
    terms: tuple = ()

    def by_component(self) -> dict[int, list[tuple[int, ...]]]:
        out: dict[int, list] = {}
        for c, e in self.terms:
            out.setdefault(c, []).append(tuple(e))
        return out


@dataclass(frozen=True, eq=False)
class GroebnerBasis:
    ambient: GradedFreeModule
    vectors: tuple
    leads: tuple
    reduced: bool = True
    order: str = "grevlex/POT"

    @property
    def ring(self) -> Ring:
        return self.ambient.ring

    @property
    def basis(self) -> Submodule:
        return Submodule(self.ambient, self.vectors)

    def _table(self) -> dict:
        return _table_of(self.ring, self.vectors, self.leads)

    def lead_term_module(self) -> LeadTermModule:
        r = self.ring
        return LeadTermModule(self.ambient, tuple((l >> r.comp_shift, r.unpack(l & r.mono_mask)) for l in self.leads))

    def contains(self, v: Vector) -> bool:
        return not normal_form(v, self)

    def __len__(self) -> int:
        return len(self.vectors)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroebnerBasis):
            return NotImplemented
        return self.ambient == other.ambient and list(self.vectors) == list(other.vectors)

    def __hash__(self):
        return hash((self.ambient, tuple(frozenset(v.items()) for v in self.vectors)))


# --- operations -------------------------------------------------------------

def buchberger(S: Submodule) -> GroebnerBasis:
    """Reduced Groebner basis of ``S`` (grevlex, position over term)."""
    ring = S.ring
    res = _engine(ring, S.ambient.twists, S.vectors)
    vecs, leads = _interreduce(ring, S.ambient.twists, res.basis, res.leads)
    return GroebnerBasis(S.ambient, tuple(vecs), tuple(leads))


def minimal_generators(S: Submodule) -> tuple[Submodule, GroebnerBasis]:
    """A minimal homogeneous generating subset of ``S`` plus its reduced GB."""
    ring = S.ring
    res = _engine(ring, S.ambient.twists, S.vectors, track_minimal=True)
    vecs, leads = _interreduce(ring, S.ambient.twists, res.basis, res.leads)
    gens = tuple(S.vectors[i] for i in sorted(res.minimal))
    return Submodule(S.ambient, gens), GroebnerBasis(S.ambient, tuple(vecs), tuple(leads))


def normal_form(v: Vector, G: GroebnerBasis) -> Vector:
    ring = G.ring
    for t in v:
        if t >> ring.comp_shift >= G.ambient.rank:
            raise ValueError("vector lies outside the Groebner basis ambient")
    reduce = _make_reducer(ring, G.ambient.rank)
    return reduce(v, G._table())


def preimage(ring: Ring, target_twists: Sequence[int], images: Sequence[Vector], source_twists: Sequence[int],
             relations: Sequence[Vector] = ()) -> list[Vector]:
    """Generators of {c in G : sum_k c_k images[k] in span(relations)}.

    ``images[k]`` is the image of the k-th basis vector of G = sum R(-source_twists[k])
    in the free module with ``target_twists``; all must be homogeneous of the
    matching degree.
    """
    r = len(target_twists)
    shift = ring.comp_shift
    mask = ring.mono_mask
    aug = tuple(target_twists) + tuple(source_twists)
    vecs = []
    for k, g in enumerate(images):
        v = dict(g)
        v[(r + k) << shift] = 1
        vecs.append(v)
    vecs.extend(relations)
    res = _engine(ring, aug, vecs, nhead=r)
    out = []
    for tv in res.tails:
        out.append({(((t >> shift) - r) << shift) | (t & mask): c for t, c in tv.items()})
    return out


def syzygies(S: Submodule) -> Submodule:
    """Syzygy module of the generators, in the free module with one basis
    element per generator, twisted by the generator degrees."""
    src = GradedFreeModule(S.ring, S.degrees)
    vecs = preimage(S.ring, S.ambient.twists, S.vectors, src.twists)
    return Submodule(src, tuple(vecs))


def kernel_of_map(M: GradedMatrix) -> Submodule:
    vecs = preimage(M.ring, M.target.twists, M.column_vectors(), M.source.twists)
    return Submodule(M.source, tuple(vecs))


def intersect(A: Submodule, B: Submodule) -> Submodule:
    if A.ambient != B.ambient:
        raise ValueError("ambient mismatch")
    coeffs = preimage(A.ring, A.ambient.twists, A.vectors, A.degrees, B.vectors)
    cols = A.vectors
    out = []
    ring = A.ring
    shift, mask = ring.comp_shift, ring.mono_mask
    for c in coeffs:
        acc: dict = {}
        for t, a in c.items():
            k = t >> shift
            m = t & mask
            acc = add_vectors(ring, acc, {u + m: b for u, b in cols[k].items()}, a)
        if acc:
            out.append(acc)
    return Submodule(A.ambient, tuple(out))


def colon(L: Submodule, J: Sequence[Poly]) -> Submodule:
    """(L : J) = {v : j v in L for all j in J}."""
    ring = L.ring
    J = [j for j in J if j]
    if not J:
        return Submodule(L.ambient, tuple({i << ring.comp_shift: 1} for i in range(L.ambient.rank)))
    for j in J:
        if not j.is_homogeneous():
            raise ValueError("ideal generators must be homogeneous")
    r = L.ambient.rank
    tw = L.ambient.twists
    jdeg = [j.degree for j in J]
    top = max(jdeg)
    shift = ring.comp_shift
    target_twists = []
    for k in range(len(J)):
        target_twists.extend(a - jdeg[k] + top for a in tw)
    images = []
    for c in range(r):
        v = {}
        for k, j in enumerate(J):
            base = (k * r + c) << shift
            for m, a in j._terms.items():
                v[base | m] = a
        images.append(v)
    rels = []
    for k in range(len(J)):
        for g in L.vectors:
            rels.append(shift_components(ring, g, k * r))
    vecs = preimage(ring, target_twists, images, [a + top for a in tw], rels)
    return Submodule(L.ambient, tuple(vecs))


def maximal_ideal(ring: Ring) -> list[Poly]:
    return ring.gens()


def colon_and_saturate(L: Submodule, J: Sequence[Poly], mode: str = "colon") -> Submodule:
    if mode == "colon":
        return colon(L, J)
    if mode != "saturate":
        raise ValueError(f"unknown mode {mode!r}")
    current, gb = minimal_generators(L)
    while True:
        nxt, gb_next = minimal_generators(colon(current, J))
        if gb_next == gb:
            return current
        current, gb = nxt, gb_next


# --- Hilbert function primitives ----------------------------------------------

def _minimal_monomials(gens: Iterable[tuple[int, ...]]) -> tuple[tuple[int, ...], ...]:
    gs = sorted(set(gens), key=sum)
    kept: list = []
    for g in gs:
        if not any(all(a <= b for a, b in zip(k, g)) for k in kept):
            kept.append(g)
    return tuple(sorted(kept))


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _poly_add(a: dict, b: dict, c: int = 1) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=65536)
def _ideal_numerator(gens: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, int], ...]:
    gens = _minimal_monomials(gens)
    if not gens:
        return ((0, 1),)
    if all(sum(1 for e in g if e) <= 1 for g in gens):
        acc = {0: 1}
        for g in gens:
            acc = _poly_mul(acc, {0: 1, sum(g): -1})
        return tuple(sorted(acc.items()))
    n = len(gens[0])
    counts = [0] * n
    for g in gens:
        if sum(1 for e in g if e) > 1:
            for i, e in enumerate(g):
                if e:
                    counts[i] += 1
    var = max(range(n), key=lambda i: (counts[i], -i))
    pivot = tuple(1 if i == var else 0 for i in range(n))
    plus = _ideal_numerator(_minimal_monomials(gens + (pivot,)))
    quot = _ideal_numerator(_minimal_monomials(tuple(
        tuple(e - 1 if (i == var and e) else e for i, e in enumerate(g)) for g in gens)))
    out = _poly_add(dict(plus), {k + 1: v for k, v in quot})
    return tuple(sorted(out.items()))


def hilbert_numerator(L: LeadTermModule) -> dict[int, int]:
    """N(t) with HS(ambient / L) = N(t) / (1 - t)^d, as {exponent: coefficient}."""
    by = L.by_component()
    acc: dict = {}
    for c, a in enumerate(L.ambient.twists):
        num = _ideal_numerator(_minimal_monomials(by.get(c, ())))
        acc = _poly_add(acc, {k + a: v for k, v in num})
    return acc


def standard_monomial_count(L: LeadTermModule, t: int) -> int:
    ring = L.ambient.ring
    by = L.by_component()
    total = 0
    for c, a in enumerate(L.ambient.twists):
        gens = by.get(c, [])
        for m in ring.monomials(t - a):
            e = ring.unpack(m)
            if not any(all(x <= y for x, y in zip(g, e)) for g in gens):
                total += 1
    return total
