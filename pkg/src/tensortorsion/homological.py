"""Presentations, minimal free resolutions, Ext, Tor, tensor products, duals
and the finite-support part of graded modules."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

from .algebra import GradedFreeModule, GradedMatrix, Poly, Ring, check_homogeneous
from .groebner import (
    GroebnerBasis,
    Submodule,
    buchberger,
    colon_and_saturate,
    minimal_generators,
    normal_form,
    preimage,
    vector_degree,
)


class ContainmentError(ValueError):
    """B is not contained in Z in a subquotient Z/B."""


class HomogeneityError(ValueError):
    def __init__(self, entry: tuple[int, int], message: str = "entry is not homogeneous of the required degree"):
        self.entry = entry
        super().__init__(f"{message} at {entry}")


@dataclass(frozen=True, eq=False)
class ModulePres:
    """coker(matrix): F1 -> F0.  ``_cache`` holds derived data (resolution,
    Groebner basis, ...) which is a pure function of the matrix."""

    matrix: GradedMatrix
    minimal: bool = False
    meta: dict = field(default_factory=dict, compare=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        ok, bad = check_homogeneous(self.matrix)
        if not ok:
            raise HomogeneityError(bad)

    @property
    def ring(self) -> Ring:
        return self.matrix.ring

    @property
    def generators_module(self) -> GradedFreeModule:
        return self.matrix.target

    @property
    def twists(self) -> tuple[int, ...]:
        return self.matrix.target.twists

    @classmethod
    def zero(cls, ring: Ring) -> "ModulePres":
        F = GradedFreeModule(ring, ())
        return cls(GradedMatrix(F, F, ()), minimal=True)

    @classmethod
    def free(cls, ring: Ring, twists: Sequence[int] = (0,)) -> "ModulePres":
        return cls(GradedMatrix(GradedFreeModule(ring, ()), GradedFreeModule(ring, tuple(twists)), ()), minimal=True)

    @classmethod
    def from_columns(cls, ring: Ring, row_twists: Sequence[int], columns: Sequence[Sequence[Poly]], meta=None) -> "ModulePres":
        """Infer column twists from row twists and entry degrees."""
        src = infer_source_twists(ring, row_twists, columns)
        rows = tuple(tuple(col[i] for col in columns) for i in range(len(row_twists)))
        M = GradedMatrix(GradedFreeModule(ring, tuple(src)), GradedFreeModule(ring, tuple(row_twists)), rows)
        return cls(M, meta=dict(meta or {}))

    @classmethod
    def from_rows(cls, ring: Ring, row_twists: Sequence[int], rows: Sequence[Sequence[Poly | str]], meta=None) -> "ModulePres":
        rows = [[_coerce_entry(ring, e) for e in row] for row in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        if len(rows) != len(row_twists):
            raise ValueError("row_twists length differs from the number of rows")
        cols = [[rows[i][j] for i in range(len(rows))] for j in range(ncols)]
        return cls.from_columns(ring, row_twists, cols, meta)

    @classmethod
    def quotient_ring(cls, ring: Ring, gens: Sequence[Poly]) -> "ModulePres":
        """R / (gens)."""
        return cls.from_columns(ring, (0,), [[g] for g in gens if g])

    @classmethod
    def from_submodule(cls, S: Submodule) -> "ModulePres":
        """ambient / S."""
        return cls(S.as_matrix())

    def image(self) -> Submodule:
        return Submodule.image(self.matrix)

    def groebner(self) -> GroebnerBasis:
        if "gb" not in self._cache:
            self._cache["gb"] = buchberger(self.image())
        return self._cache["gb"]

    def is_zero(self) -> bool:
        return minimalize(self).matrix.target.rank == 0

    def __str__(self) -> str:
        return f"coker {self.matrix} (row twists {list(self.twists)})"


def _coerce_entry(ring: Ring, e) -> Poly:
    if isinstance(e, Poly):
        return e
    if isinstance(e, str):
        return ring.parse(e)
    return ring.const(int(e))


def infer_source_twists(ring: Ring, row_twists: Sequence[int], columns: Sequence[Sequence[Poly]]) -> list[int]:
    out = []
    for j, col in enumerate(columns):
        if len(col) != len(row_twists):
            raise ValueError(f"column {j} has {len(col)} entries, expected {len(row_twists)}")
        deg = None
        for i, f in enumerate(col):
            if f.is_zero():
                continue
            if not f.is_homogeneous():
                raise HomogeneityError((i, j))
            d = f.degree + row_twists[i]
            if deg is None:
                deg = d
            elif d != deg:
                raise HomogeneityError((i, j))
        out.append(deg if deg is not None else 0)
    return out


# --- minimalization ------------------------------------------------------------

def _prune_units(ring: Ring, twists: list[int], cols: list[dict]) -> tuple[list[int], list[dict]]:
    """Split off unit entries: each unit at (row i, col j) removes generator i
    and relation j."""
    p = ring.char
    shift = ring.comp_shift
    mask = ring.mono_mask
    cols = [dict(c) for c in cols if c]
    dead_rows: set[int] = set()
    while True:
        found = None
        for j, col in enumerate(cols):
            for t, c in col.items():
                if t & mask == 0:
                    cand = (t >> shift, j, c)
                    if found is None or cand < found:
                        found = cand
            if found is not None:
                break
        if found is None:
            break
        i, j, c = found
        inv = pow(c, p - 2, p)
        pivot = {t: a * inv % p for t, a in cols[j].items()}
        new_cols = []
        for l, col in enumerate(cols):
            if l == j:
                continue
            row_part = {t & mask: a for t, a in col.items() if t >> shift == i}
            if row_part:
                col = dict(col)
                for m, a in row_part.items():
                    for t, b in pivot.items():
                        u = t + m
                        nv = (col.get(u, 0) - a * b) % p
                        if nv:
                            col[u] = nv
                        else:
                            col.pop(u, None)
            if col:
                new_cols.append(col)
        cols = new_cols
        dead_rows.add(i)
    keep = [i for i in range(len(twists)) if i not in dead_rows]
    remap = {old: new for new, old in enumerate(keep)}
    out = []
    for col in cols:
        out.append({(remap[t >> shift] << shift) | (t & mask): a for t, a in col.items()})
    return [twists[i] for i in keep], out


def minimalize(P: ModulePres) -> ModulePres:
    """Minimal presentation: no unit entries and a minimal set of relations."""
    if P.minimal:
        return P
    if "minimal" in P._cache:
        return P._cache["minimal"]
    ring = P.ring
    twists, cols = _prune_units(ring, list(P.twists), P.matrix.column_vectors())
    F0 = GradedFreeModule(ring, tuple(twists))
    S, gb = minimal_generators(Submodule(F0, tuple(cols)))
    M = S.as_matrix()
    Q = ModulePres(M, minimal=True, meta=dict(P.meta))
    Q._cache["gb"] = gb
    P._cache["minimal"] = Q
    return Q


# --- resolutions --------------------------------------------------------------

@dataclass(frozen=True)
class BettiTable:
    twists: tuple[tuple[int, ...], ...]

    @property
    def betti(self) -> tuple[int, ...]:
        return tuple(len(t) for t in self.twists)

    def beta(self, i: int) -> int:
        return len(self.twists[i]) if 0 <= i < len(self.twists) else 0

    @property
    def regularity(self) -> int | None:
        vals = [a - i for i, tw in enumerate(self.twists) for a in tw]
        return max(vals) if vals else None

    def graded(self) -> dict[tuple[int, int], int]:
        """beta_{i, j} keyed by (homological index, internal degree)."""
        out: dict = {}
        for i, tw in enumerate(self.twists):
            for a in tw:
                out[(i, a)] = out.get((i, a), 0) + 1
        return out


@dataclass(frozen=True)
class Resolution:
    """maps[k] is phi_{k+1}: F_{k+1} -> F_k."""

    base: GradedFreeModule
    maps: tuple[GradedMatrix, ...]
    minimal: bool = True

    @property
    def frees(self) -> list[GradedFreeModule]:
        return [self.base] + [m.source for m in self.maps]

    @property
    def length(self) -> int:
        return len(self.maps)

    def betti_table(self) -> BettiTable:
        if self.base.rank == 0:
            return BettiTable(())
        return BettiTable(tuple(F.twists for F in self.frees))


def free_resolution(P: ModulePres) -> tuple[Resolution, BettiTable]:
    P = minimalize(P)
    if "resolution" in P._cache:
        res = P._cache["resolution"]
        return res, res.betti_table()
    ring = P.ring
    maps = []
    M = P.matrix
    while M.source.rank:
        maps.append(M)
        if len(maps) > ring.nvars + 1:
            raise RuntimeError("resolution longer than the number of variables")
        K = preimage(ring, M.target.twists, M.column_vectors(), M.source.twists)
        S, _ = minimal_generators(Submodule(M.source, tuple(K)))
        M = S.as_matrix()
    res = Resolution(P.matrix.target, tuple(maps))
    P._cache["resolution"] = res
    return res, res.betti_table()


# --- subquotients, Ext, Tor -----------------------------------------------------

def subquotient_pres(Z: Submodule, B: Submodule) -> ModulePres:
    """Presentation of Z/B; B must lie in Z (checked)."""
    if Z.ambient != B.ambient:
        raise ValueError("Z and B live in different free modules")
    ring = Z.ring
    if Z.is_zero():
        if not B.is_zero():
            raise ContainmentError("B is nonzero but Z is zero")
        return ModulePres.zero(ring)
    gens, gb = minimal_generators(Z)
    for k, b in enumerate(B.vectors):
        if normal_form(b, gb):
            raise ContainmentError(f"generator {k} of B is not in Z")
    G = GradedFreeModule(ring, gens.degrees)
    rels = preimage(ring, Z.ambient.twists, gens.vectors, G.twists, B.vectors)
    S = Submodule(G, tuple(rels))
    return minimalize(ModulePres(S.as_matrix()))


def _identity_vectors(ring: Ring, rank: int) -> tuple:
    return tuple({i << ring.comp_shift: 1} for i in range(rank))


def ext_module(P: ModulePres, i: int) -> ModulePres:
    """Ext^i_R(M, R) from the dualized minimal resolution."""
    ring = P.ring
    d = ring.nvars
    if not 0 <= i <= d:
        raise ValueError(f"Ext index {i} outside 0..{d}")
    P = minimalize(P)
    key = ("ext", i)
    if key in P._cache:
        return P._cache[key]
    res, _ = free_resolution(P)
    if P.matrix.target.rank == 0 or i > res.length:
        out = ModulePres.zero(ring)
    else:
        Fi_dual = res.frees[i].dual()
        if i + 1 <= res.length:
            phi_next_T = res.maps[i].transpose()
            Z = Submodule(Fi_dual, tuple(preimage(ring, phi_next_T.target.twists, phi_next_T.column_vectors(),
                                                  phi_next_T.source.twists)))
        else:
            Z = Submodule(Fi_dual, _identity_vectors(ring, Fi_dual.rank))
        if i >= 1:
            B = Submodule.image(res.maps[i - 1].transpose())
        else:
            B = Submodule(Fi_dual, ())
        out = subquotient_pres(Z, B)
    P._cache[key] = out
    return out


def _kron_left(ring: Ring, cols: Sequence[dict], rank_right: int) -> list[dict]:
    """Columns of phi (x) I_G, ordered by (source index of phi, basis index of G)."""
    shift = ring.comp_shift
    mask = ring.mono_mask
    out = []
    for col in cols:
        for g in range(rank_right):
            out.append({(((t >> shift) * rank_right + g) << shift) | (t & mask): c for t, c in col.items()})
    return out


def _kron_right(ring: Ring, rank_left: int, cols: Sequence[dict], rank_right: int) -> list[dict]:
    """Columns of I_F (x) psi."""
    shift = ring.comp_shift
    mask = ring.mono_mask
    out = []
    for f in range(rank_left):
        for col in cols:
            out.append({((f * rank_right + (t >> shift)) << shift) | (t & mask): c for t, c in col.items()})
    return out


def tensor_pres(PA: ModulePres, PB: ModulePres) -> ModulePres:
    """coker [phi (x) I | I (x) psi] on F0 (x) G0; not minimalized."""
    PA.ring.check_same(PB.ring)
    ring = PA.ring
    phi, psi = PA.matrix, PB.matrix
    F0, G0 = phi.target, psi.target
    cols = _kron_left(ring, phi.column_vectors(), G0.rank) + _kron_right(ring, F0.rank, psi.column_vectors(), G0.rank)
    src = phi.source.tensor(G0) + F0.tensor(psi.source)
    return ModulePres(GradedMatrix.from_vectors(src, F0.tensor(G0), cols))


def tor_module(PA: ModulePres, PB: ModulePres, i: int) -> ModulePres:
    """Tor_i(A, B) as the homology of (minimal resolution of A) (x) B."""
    PA.ring.check_same(PB.ring)
    ring = PA.ring
    d = ring.nvars
    if not 0 <= i <= d:
        raise ValueError(f"Tor index {i} outside 0..{d}")
    res, _ = free_resolution(PA)
    if res.base.rank == 0 or i > res.length:
        return ModulePres.zero(ring)
    psi = PB.matrix
    G0 = psi.target
    frees = res.frees
    Fi = frees[i]
    ambient = Fi.tensor(G0)
    psi_cols = psi.column_vectors()
    N_i = _kron_right(ring, Fi.rank, psi_cols, G0.rank)
    if i == 0:
        Z = Submodule(ambient, _identity_vectors(ring, ambient.rank))
    else:
        phi_i = res.maps[i - 1]
        images = _kron_left(ring, phi_i.column_vectors(), G0.rank)
        target = frees[i - 1].tensor(G0)
        rel = _kron_right(ring, frees[i - 1].rank, psi_cols, G0.rank)
        Z = Submodule(ambient, tuple(preimage(ring, target.twists, images, ambient.twists, rel)))
    bvecs = list(N_i)
    if i < res.length:
        bvecs += _kron_left(ring, res.maps[i].column_vectors(), G0.rank)
    return subquotient_pres(Z, Submodule(ambient, tuple(bvecs)))


# --- duals, torsion, finite support ----------------------------------------------

class DualData(NamedTuple):
    dual: ModulePres          # M*
    bidual: ModulePres        # M**
    bidual_map: GradedMatrix  # F0 -> (generators of M*)^*, inducing M -> M**
    cokernel: ModulePres      # C = coker(M -> M**)
    torsion: ModulePres       # T = ker(M -> M**)


def dual_and_bidual(P: ModulePres) -> DualData:
    P = minimalize(P)
    if "dual" in P._cache:
        return P._cache["dual"]
    ring = P.ring
    phi = P.matrix
    F0 = phi.target
    phiT = phi.transpose()
    W = Submodule(F0.dual(), tuple(preimage(ring, phiT.target.twists, phiT.column_vectors(), phiT.source.twists)))
    W, _ = minimal_generators(W)
    shift, mask = ring.comp_shift, ring.mono_mask
    if W.is_zero():
        zero = ModulePres.zero(ring)
        out = DualData(zero, zero, GradedMatrix(F0, GradedFreeModule(ring, ()), ()), zero, P)
        P._cache["dual"] = out
        return out
    G = GradedFreeModule(ring, W.degrees)
    syzW = Submodule(G, tuple(preimage(ring, F0.dual().twists, W.vectors, G.twists)))
    syzW, _ = minimal_generators(syzW)
    dual = ModulePres(syzW.as_matrix(), minimal=True)
    # M** = ker(S^T) inside G*
    S = syzW.as_matrix()
    ST = S.transpose()
    Gd = G.dual()
    Zbi = Submodule(Gd, tuple(preimage(ring, ST.target.twists, ST.column_vectors(), ST.source.twists)))
    bidual = subquotient_pres(Zbi, Submodule(Gd, ()))
    # bidual map F0 -> G*: column j has entry w_k[j] in row k
    cols = []
    for j in range(F0.rank):
        col = {}
        for k, w in enumerate(W.vectors):
            for t, c in w.items():
                if t >> shift == j:
                    col[(k << shift) | (t & mask)] = c
        cols.append(col)
    bimap = GradedMatrix.from_vectors(F0, Gd, cols)
    coker = subquotient_pres(Zbi, Submodule(Gd, tuple(c for c in cols if c)))
    Wmat = W.as_matrix()
    WT = Wmat.transpose()  # F0 -> G* as well, same as bimap
    kerW = Submodule(F0, tuple(preimage(ring, WT.target.twists, WT.column_vectors(), WT.source.twists)))
    torsion = subquotient_pres(kerW, P.image())
    out = DualData(dual, bidual, bimap, coker, torsion)
    P._cache["dual"] = out
    return out


def torsion_submodule(P: ModulePres) -> ModulePres:
    return dual_and_bidual(P).torsion


def torsion_free_quotient(P: ModulePres) -> ModulePres:
    """A' = A / T(A), presented as F0 / ker(F0 -> M**)."""
    P = minimalize(P)
    if "tfq" in P._cache:
        return P._cache["tfq"]
    ring = P.ring
    data = dual_and_bidual(P)
    F0 = P.matrix.target
    bm = data.bidual_map
    if bm.target.rank == 0:
        out = ModulePres.zero(ring)
    else:
        ker = Submodule(F0, tuple(preimage(ring, bm.target.twists, bm.column_vectors(), bm.source.twists)))
        out = minimalize(ModulePres(ker.as_matrix()))
    P._cache["tfq"] = out
    return out


class FiniteSupport(NamedTuple):
    finite_part: ModulePres   # M0 = H^0_m(M)
    quotient: ModulePres      # Mbar = M / M0
    saturation: Submodule     # (im phi : m^inf) inside F0


def finite_support_part(P: ModulePres) -> FiniteSupport:
    P = minimalize(P)
    if "finite_support" in P._cache:
        return P._cache["finite_support"]
    ring = P.ring
    L = P.image()
    sat = colon_and_saturate(L, ring.gens(), "saturate")
    M0 = subquotient_pres(sat, L)
    Mbar = minimalize(ModulePres(sat.as_matrix()))
    out = FiniteSupport(M0, Mbar, sat)
    P._cache["finite_support"] = out
    return out


def syzygy_module(P: ModulePres) -> ModulePres:
    """Omega M: the kernel of the minimal free cover F0 -> M, presented by phi_2."""
    P = minimalize(P)
    res, _ = free_resolution(P)
    ring = P.ring
    if res.length == 0:
        return ModulePres.zero(ring)
    if res.length == 1:
        return ModulePres.free(ring, res.frees[1].twists)
    return ModulePres(res.maps[1], minimal=True)


def direct_sum(PA: ModulePres, PB: ModulePres) -> ModulePres:
    PA.ring.check_same(PB.ring)
    ring = PA.ring
    a, b = PA.matrix, PB.matrix
    cols = a.column_vectors() + [
        {t + (a.target.rank << ring.comp_shift): c for t, c in v.items()} for v in b.column_vectors()
    ]
    return ModulePres(GradedMatrix.from_vectors(a.source + b.source, a.target + b.target, cols))
