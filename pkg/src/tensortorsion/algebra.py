"""Exact polynomial arithmetic over F_p, monomial orders and graded matrices.

Monomials are packed into Python ints: one 16-bit field per variable (``x1``
in the lowest field, the last variable highest), then a field holding the total
degree.  A module term additionally carries its component index above the
monomial fields.  With this layout

* multiplying monomials is integer addition,
* divisibility is a single guarded subtraction,
* ``term ^ ring.flip`` sorts ascending exactly in descending
  position-over-term / grevlex order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

FIELD_BITS = 16
_FMASK = (1 << FIELD_BITS) - 1
MAX_EXPONENT = (1 << (FIELD_BITS - 1)) - 1

DEFAULT_CHAR = 32003


class RingMismatch(ValueError):
    """Operands live in different ring contexts."""


class ParseError(ValueError):
    def __init__(self, message: str, column: int | None = None, line: int | None = None):
        self.column = column
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def _default_names(n: int) -> tuple[str, ...]:
    if n <= 3:
        return ("x", "y", "z")[:n]
    return tuple(f"x{i + 1}" for i in range(n))


@dataclass(frozen=True)
class Ring:
    """The graded ring k[x_1..x_n] with k = F_p, all variables of degree 1."""

    nvars: int
    char: int = DEFAULT_CHAR
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.nvars < 1:
            raise ValueError("need at least one variable")
        if not _is_prime(self.char):
            raise ValueError(f"characteristic {self.char} is not prime")
        if not self.names:
            object.__setattr__(self, "names", _default_names(self.nvars))
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.names) != self.nvars or len(set(self.names)) != self.nvars:
            raise ValueError("variable names must be distinct, one per variable")

    # --- packing -------------------------------------------------------
    @cached_property
    def deg_shift(self) -> int:
        return self.nvars * FIELD_BITS

    @cached_property
    def comp_shift(self) -> int:
        return (self.nvars + 1) * FIELD_BITS

    @cached_property
    def mono_mask(self) -> int:
        return (1 << self.comp_shift) - 1

    @cached_property
    def guard(self) -> int:
        g = 0
        for k in range(self.nvars + 1):
            g |= 1 << (k * FIELD_BITS + FIELD_BITS - 1)
        return g

    @cached_property
    def flip(self) -> int:
        return _FMASK << self.deg_shift

    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise ValueError(f"expected {self.nvars} exponents, got {len(exps)}")
        m = 0
        for k, e in enumerate(exps):
            if e < 0 or e > MAX_EXPONENT:
                raise ValueError(f"exponent {e} out of range")
            m |= e << (k * FIELD_BITS)
        return m | (sum(exps) << self.deg_shift)

    def unpack(self, m: int) -> tuple[int, ...]:
        return tuple((m >> (k * FIELD_BITS)) & _FMASK for k in range(self.nvars))

    def mono_degree(self, m: int) -> int:
        return (m >> self.deg_shift) & _FMASK

    def divides(self, a: int, b: int) -> bool:
        """Monomial (or same-component term) ``a`` divides ``b``."""
        g = self.guard
        return (a >> self.comp_shift) == (b >> self.comp_shift) and (
            ((b | g) - (a & self.mono_mask)) & g
        ) == g

    def lcm(self, a: int, b: int) -> int:
        res = 0
        deg = 0
        for k in range(self.nvars):
            sh = k * FIELD_BITS
            ea = (a >> sh) & _FMASK
            eb = (b >> sh) & _FMASK
            e = ea if ea > eb else eb
            res |= e << sh
            deg += e
        return res | (deg << self.deg_shift) | ((a >> self.comp_shift) << self.comp_shift)

    def gcd(self, a: int, b: int) -> int:
        res = 0
        deg = 0
        for k in range(self.nvars):
            sh = k * FIELD_BITS
            ea = (a >> sh) & _FMASK
            eb = (b >> sh) & _FMASK
            e = ea if ea < eb else eb
            res |= e << sh
            deg += e
        return res | (deg << self.deg_shift)

    def var(self, i: int) -> "Poly":
        exps = [0] * self.nvars
        exps[i] = 1
        return Poly(self, {self.pack(exps): 1})

    def gens(self) -> list["Poly"]:
        return [self.var(i) for i in range(self.nvars)]

    def one(self) -> "Poly":
        return Poly(self, {0: 1})

    def zero(self) -> "Poly":
        return Poly(self, {})

    def const(self, c: int) -> "Poly":
        c %= self.char
        return Poly(self, {0: c} if c else {})

    def monomials(self, degree: int) -> list[int]:
        """All packed monomials of the given degree, in descending grevlex order."""
        if degree < 0:
            return []
        out = []

        def rec(k, left, acc):
            if k == self.nvars - 1:
                out.append(acc + [left])
                return
            for e in range(left, -1, -1):
                rec(k + 1, left - e, acc + [e])

        rec(0, degree, [])
        monos = [self.pack(e) for e in out]
        monos.sort(key=lambda m: m ^ self.flip)
        return monos

    def parse(self, text: str) -> "Poly":
        return parse_poly(self, text)

    def check_same(self, other: "Ring") -> None:
        if self != other:
            raise RingMismatch(f"ring mismatch: {self} vs {other}")

    def __repr__(self) -> str:
        return f"Ring(F_{self.char}[{','.join(self.names)}])"


# --- orders on exponent tuples (reference definitions) --------------------

def monomial_compare(a: Sequence[int], b: Sequence[int]) -> int:
    """Graded reverse lexicographic comparison; returns -1, 0 or 1."""
    if len(a) != len(b):
        raise ValueError("monomials have different variable counts")
    da, db = sum(a), sum(b)
    if da != db:
        return 1 if da > db else -1
    for ea, eb in zip(reversed(a), reversed(b)):
        if ea != eb:
            return 1 if ea < eb else -1
    return 0


@dataclass(frozen=True)
class GradedFreeModule:
    """F = sum_j R(-twists[j])."""

    ring: Ring
    twists: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(int(a) for a in self.twists))

    @property
    def rank(self) -> int:
        return len(self.twists)

    def dual(self) -> "GradedFreeModule":
        return GradedFreeModule(self.ring, tuple(-a for a in self.twists))

    def __add__(self, other: "GradedFreeModule") -> "GradedFreeModule":
        self.ring.check_same(other.ring)
        return GradedFreeModule(self.ring, self.twists + other.twists)

    def tensor(self, other: "GradedFreeModule") -> "GradedFreeModule":
        self.ring.check_same(other.ring)
        return GradedFreeModule(self.ring, tuple(a + b for a in self.twists for b in other.twists))


class FreeModuleTerm(NamedTuple):
    ambient: GradedFreeModule
    component: int
    monomial: tuple[int, ...]


def module_term_compare(a: FreeModuleTerm, b: FreeModuleTerm) -> int:
    """Position over term: the smaller component index is the larger term."""
    if a.ambient != b.ambient:
        raise ValueError("terms live in different free modules")
    for t in (a, b):
        if not 0 <= t.component < t.ambient.rank:
            raise ValueError(f"component {t.component} outside rank {t.ambient.rank}")
    if a.component != b.component:
        return 1 if a.component < b.component else -1
    return monomial_compare(a.monomial, b.monomial)


# --- polynomials ----------------------------------------------------------

class Poly:
    """Immutable sparse polynomial.  ``_terms`` maps packed monomials to
    nonzero residues; callers must not mutate it."""

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: Ring, terms: dict[int, int] | None = None):
        self.ring = ring
        p = ring.char
        self._terms = {m: c % p for m, c in (terms or {}).items() if c % p}

    @classmethod
    def _raw(cls, ring: Ring, terms: dict[int, int]) -> "Poly":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj._terms = terms
        return obj

    @classmethod
    def from_terms(cls, ring: Ring, terms: Iterable[tuple[int, Sequence[int]]]) -> "Poly":
        acc: dict[int, int] = {}
        for c, exps in terms:
            m = ring.pack(exps)
            acc[m] = acc.get(m, 0) + c
        return cls(ring, acc)

    @property
    def terms(self) -> tuple[tuple[int, tuple[int, ...]], ...]:
        """(coefficient, exponents) pairs, strictly descending in grevlex."""
        r = self.ring
        return tuple((self._terms[m], r.unpack(m)) for m in sorted(self._terms, key=lambda m: m ^ r.flip))

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degrees(self) -> set[int]:
        return {self.ring.mono_degree(m) for m in self._terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int | None:
        ds = self.degrees()
        return max(ds) if ds else None

    def is_constant(self) -> bool:
        return all(m == 0 for m in self._terms)

    def lead(self) -> tuple[int, tuple[int, ...]]:
        if not self._terms:
            raise ValueError("zero polynomial has no lead term")
        r = self.ring
        m = min(self._terms, key=lambda t: t ^ r.flip)
        return self._terms[m], r.unpack(m)

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self.ring.check_same(other.ring)
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.char
        out = dict(self._terms)
        for m, c in other._terms.items():
            v = (out.get(m, 0) + c) % p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Poly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.char
        return Poly._raw(self.ring, {m: p - c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: int) -> "Poly":
        return Poly(self.ring, {m: a * c for m, a in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.ring.char
        out: dict[int, int] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = m1 + m2
                out[m] = (out.get(m, 0) + c1 * c2) % p
        return Poly._raw(self.ring, {m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = self.ring.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring == other.ring and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.ring, frozenset(self._terms.items())))

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"


def poly_arith(op: str, f: Poly, g: Poly | int) -> Poly:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "scale":
        if isinstance(g, Poly):
            raise TypeError("scale takes a field scalar")
        return f.scale(g)
    raise ValueError(f"unknown operation {op!r}")


def _signed(c: int, p: int) -> int:
    return c - p if c > p // 2 else c


def format_poly(f: Poly) -> str:
    if f.is_zero():
        return "0"
    r = f.ring
    parts = []
    for c, exps in f.terms:
        c = _signed(c, r.char)
        factors = []
        for name, e in zip(r.names, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        mono = "*".join(factors)
        mag = abs(c)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    first_sign, first = parts[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\^)|(\*)|([+-]))")


def parse_poly(ring: Ring, text: str) -> Poly:
    """Parse ``3*x^2*y - y^3`` style text; coefficients are reduced mod p."""
    index = {name: i for i, name in enumerate(ring.names)}
    toks = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        mt = _TOKEN.match(stripped, pos)
        if not mt or mt.end() == pos:
            raise ParseError(f"unexpected character {stripped[pos]!r}", column=pos + 1)
        kind = mt.lastindex
        toks.append((kind, mt.group(kind), mt.start(kind) + 1))
        pos = mt.end()
    if not toks:
        raise ParseError("empty polynomial", column=1)

    acc: dict[int, int] = {}
    i = 0
    n = len(toks)

    def expect_factor(i):
        if i >= n:
            raise ParseError("expected a factor", column=len(stripped) + 1)
        kind, val, col = toks[i]
        if kind == 1:
            return ("num", int(val)), i + 1
        if kind == 2:
            if val not in index:
                raise ParseError(f"unknown variable {val!r}", column=col)
            e = 1
            if i + 1 < n and toks[i + 1][0] == 3:
                if i + 2 >= n or toks[i + 2][0] != 1:
                    raise ParseError("expected exponent after '^'", column=toks[i + 1][2])
                e = int(toks[i + 2][1])
                return ("var", index[val], e), i + 3
            return ("var", index[val], e), i + 1
        raise ParseError(f"unexpected {val!r}", column=col)

    first = True
    while i < n:
        sign = 1
        if toks[i][0] == 5:
            sign = -1 if toks[i][1] == "-" else 1
            i += 1
        elif not first:
            raise ParseError(f"expected '+' or '-' before {toks[i][1]!r}", column=toks[i][2])
        first = False
        coeff = sign
        exps = [0] * ring.nvars
        fac, i = expect_factor(i)
        while True:
            if fac[0] == "num":
                coeff *= fac[1]
            else:
                exps[fac[1]] += fac[2]
            if i < n and toks[i][0] == 4:
                fac, i = expect_factor(i + 1)
                continue
            break
        if i < n and toks[i][0] != 5:
            raise ParseError(f"unexpected {toks[i][1]!r}", column=toks[i][2])
        m = ring.pack(exps)
        acc[m] = acc.get(m, 0) + coeff
    return Poly(ring, acc)


# --- graded matrices ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class GradedMatrix:
    """A homogeneous map source -> target; ``entries[i][j]`` is row i, column j,
    so column j is the image of the j-th basis element of the source."""

    source: GradedFreeModule
    target: GradedFreeModule
    entries: tuple[tuple[Poly, ...], ...] = field(default=())

    def __post_init__(self):
        self.source.ring.check_same(self.target.ring)
        rows = tuple(tuple(r) for r in self.entries)
        if not rows and self.target.rank:
            rows = tuple(() for _ in range(self.target.rank)) if not self.source.rank else rows
        object.__setattr__(self, "entries", rows)
        if len(rows) != self.target.rank:
            raise ValueError(f"expected {self.target.rank} rows, got {len(rows)}")
        for r in rows:
            if len(r) != self.source.rank:
                raise ValueError(f"expected {self.source.rank} columns, got {len(r)}")
            for f in r:
                self.ring.check_same(f.ring)

    @property
    def ring(self) -> Ring:
        return self.target.ring

    @property
    def shape(self) -> tuple[int, int]:
        return self.target.rank, self.source.rank

    @classmethod
    def from_vectors(cls, source: GradedFreeModule, target: GradedFreeModule, columns: Sequence[dict[int, int]]) -> "GradedMatrix":
        """Build from internal column vectors (term -> coeff dicts)."""
        ring = target.ring
        shift = ring.comp_shift
        mask = ring.mono_mask
        grid = [[{} for _ in columns] for _ in range(target.rank)]
        for j, col in enumerate(columns):
            for t, c in col.items():
                grid[t >> shift][j][t & mask] = c
        entries = tuple(tuple(Poly._raw(ring, d) for d in row) for row in grid)
        return cls(source, target, entries)

    def column_vectors(self) -> list[dict[int, int]]:
        shift = self.ring.comp_shift
        cols = []
        for j in range(self.source.rank):
            v: dict[int, int] = {}
            for i in range(self.target.rank):
                base = i << shift
                for m, c in self.entries[i][j]._terms.items():
                    v[base | m] = c
            cols.append(v)
        return cols

    def transpose(self) -> "GradedMatrix":
        """The dual map target* -> source*."""
        entries = tuple(tuple(self.entries[i][j] for i in range(self.target.rank)) for j in range(self.source.rank))
        return GradedMatrix(self.target.dual(), self.source.dual(), entries)

    def __matmul__(self, other: "GradedMatrix") -> "GradedMatrix":
        if other.target != self.source:
            raise ValueError("incompatible free modules for composition")
        r = self.ring
        rows = []
        for i in range(self.target.rank):
            row = []
            for j in range(other.source.rank):
                acc = r.zero()
                for k in range(self.source.rank):
                    a = self.entries[i][k]
                    if a:
                        b = other.entries[k][j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            rows.append(tuple(row))
        return GradedMatrix(other.source, self.target, tuple(rows))

    def is_zero(self) -> bool:
        return all(f.is_zero() for row in self.entries for f in row)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedMatrix):
            return NotImplemented
        return self.source == other.source and self.target == other.target and self.entries == other.entries

    def __hash__(self):
        return hash((self.source, self.target, self.entries))

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(str(f) for f in row) + "]" for row in self.entries) + "]"


def check_homogeneous(M: GradedMatrix) -> tuple[bool, tuple[int, int] | None]:
    """True iff every nonzero entry (i, j) is homogeneous of degree
    source.twists[j] - target.twists[i]; otherwise the first offender."""
    for i, row in enumerate(M.entries):
        for j, f in enumerate(row):
            if f.is_zero():
                continue
            want = M.source.twists[j] - M.target.twists[i]
            if f.degrees() != {want}:
                return False, (i, j)
    return True, None


def matrix_from_strings(ring: Ring, source_twists, target_twists, rows: Sequence[Sequence[str]]) -> GradedMatrix:
    entries = tuple(tuple(parse_poly(ring, s) for s in row) for row in rows)
    return GradedMatrix(GradedFreeModule(ring, tuple(source_twists)), GradedFreeModule(ring, tuple(target_twists)), entries)
