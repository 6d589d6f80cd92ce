"""Degreewise linear algebra: the independent check on the Groebner engine.

Everything here works from exponent tuples and dense numpy matrices over F_p.
Nothing is imported from the Groebner module; the only input is the public
``(coefficient, exponents)`` view of polynomial entries.
"""

from __future__ import annotations

from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np


def monomials_of_degree(n: int, k: int) -> list[tuple[int, ...]]:
    if k < 0:
        return []
    out = []
    for combo in combinations_with_replacement(range(n), k):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return out


def rank_mod_p(A: np.ndarray, p: int) -> int:
    A = np.array(A, dtype=np.int64) % p
    if A.size == 0:
        return 0
    rows, cols = A.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), p - 2, p)
        A[r] = (A[r] * inv) % p
        below = np.nonzero(A[:, c])[0]
        below = below[below != r]
        if below.size:
            A[below] = (A[below] - np.outer(A[below, c], A[r])) % p
        r += 1
    return r


class DegreeSlicer:
    """Dense degree slices of a graded free module F = sum R(-twists[i])."""

    def __init__(self, nvars: int, p: int, twists: Sequence[int]):
        self.n = nvars
        self.p = p
        self.twists = tuple(twists)

    def basis(self, t: int) -> dict[tuple[int, tuple[int, ...]], int]:
        idx = {}
        for c, a in enumerate(self.twists):
            for e in monomials_of_degree(self.n, t - a):
                idx[(c, e)] = len(idx)
        return idx

    def span_matrix(self, columns: Sequence[dict[int, list]], degrees: Sequence[int], t: int) -> np.ndarray:
        """Rows: every monomial multiple of degree t of every column."""
        idx = self.basis(t)
        rows = []
        for col, dg in zip(columns, degrees):
            for mult in monomials_of_degree(self.n, t - dg):
                row = np.zeros(len(idx), dtype=np.int64)
                for comp, terms in col.items():
                    for coeff, e in terms:
                        key = (comp, tuple(a + b for a, b in zip(e, mult)))
                        row[idx[key]] = (row[idx[key]] + coeff) % self.p
                rows.append(row)
        if not rows:
            return np.zeros((0, len(idx)), dtype=np.int64)
        return np.array(rows)


def _columns_of(matrix) -> tuple[list[dict[int, list]], list[int]]:
    """Sparse columns from a GradedMatrix-like object via public attributes."""
    cols = []
    for j in range(len(matrix.source.twists)):
        col = {}
        for i in range(len(matrix.target.twists)):
            terms = matrix.entries[i][j].terms
            if terms:
                col[i] = list(terms)
        cols.append(col)
    return cols, list(matrix.source.twists)


def image_dimension(matrix, t: int) -> int:
    ring = matrix.target.ring
    sl = DegreeSlicer(ring.nvars, ring.char, matrix.target.twists)
    cols, degs = _columns_of(matrix)
    return rank_mod_p(sl.span_matrix(cols, degs, t), ring.char)


def free_dimension(nvars: int, twists: Sequence[int], t: int) -> int:
    return sum(len(monomials_of_degree(nvars, t - a)) for a in twists)


def cokernel_hilbert_function(matrix, t: int) -> int:
    """dim_k (coker matrix)_t."""
    ring = matrix.target.ring
    return free_dimension(ring.nvars, matrix.target.twists, t) - image_dimension(matrix, t)


def kernel_dimension(matrix, t: int) -> int:
    ring = matrix.target.ring
    return free_dimension(ring.nvars, matrix.source.twists, t) - image_dimension(matrix, t)


def cokernel_hilbert_function_range(matrix, degrees: Sequence[int]) -> list[int]:
    return [cokernel_hilbert_function(matrix, t) for t in degrees]


def in_span(generators, vector, ambient_twists, nvars: int, p: int, t: int) -> bool:
    """Is ``vector`` (dict comp -> [(coeff, exps)]) of degree t in the span of
    ``generators`` (list of (dict, degree))?"""
    sl = DegreeSlicer(nvars, p, ambient_twists)
    A = sl.span_matrix([g for g, _ in generators], [d for _, d in generators], t)
    B = sl.span_matrix([vector], [t], t)
    return rank_mod_p(A, p) == rank_mod_p(np.vstack([A, B]) if A.size else B, p)


def is_exact_at(incoming, outgoing, t: int) -> bool:
    """ker(outgoing)_t == im(incoming)_t by dimension count (im <= ker assumed)."""
    return kernel_dimension(outgoing, t) == image_dimension(incoming, t)
