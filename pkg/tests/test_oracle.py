from __future__ import annotations

import itertools
from math import comb

import numpy as np
from hypothesis import given, strategies as st

from tensortorsion import oracle
from tensortorsion.algebra import Ring, matrix_from_strings


def test_rank_examples():
    assert oracle.rank_mod_p(np.zeros((0, 3)), 7) == 0
    assert oracle.rank_mod_p([[1, 2], [2, 4]], 7) == 1
    assert oracle.rank_mod_p([[1, 2], [3, 4]], 7) == 2
    # singular only in characteristic 2
    assert oracle.rank_mod_p([[1, 1], [1, 3]], 2) == 1
    assert oracle.rank_mod_p([[1, 1], [1, 3]], 3) == 2


def test_monomial_counts():
    for n in range(1, 4):
        for k in range(6):
            monos = oracle.monomials_of_degree(n, k)
            assert len(monos) == len(set(monos)) == comb(n + k - 1, k)
            assert all(sum(e) == k for e in monos)
    assert oracle.monomials_of_degree(2, -1) == []


def test_free_dimension_with_twists():
    assert oracle.free_dimension(2, (0, 1), 3) == 4 + 3
    assert oracle.free_dimension(3, (2,), 1) == 0


def test_cokernel_of_maximal_ideal_generators():
    R = Ring(2)
    M = matrix_from_strings(R, (1, 1), (0,), [["x", "y"]])
    assert oracle.cokernel_hilbert_function_range(M, range(4)) == [1, 0, 0, 0]
    assert oracle.kernel_dimension(M, 2) == 1


def test_koszul_complex_is_exact():
    R = Ring(3)
    d1 = matrix_from_strings(R, (1, 1, 1), (0,), [["x", "y", "z"]])
    d2 = matrix_from_strings(R, (2, 2, 2), (1, 1, 1),
                             [["y", "z", "0"], ["-x", "0", "z"], ["0", "-x", "-y"]])
    for t in range(5):
        assert oracle.is_exact_at(d2, d1, t)


def _brute_rank(A, p):
    """Rank via the size of the row space, by enumeration (tiny p only)."""
    A = [list(r) for r in A]
    if not A:
        return 0
    cols = len(A[0])
    span = set()
    for coeffs in itertools.product(range(p), repeat=len(A)):
        span.add(tuple(sum(c * r[j] for c, r in zip(coeffs, A)) % p for j in range(cols)))
    r = 0
    while p ** r < len(span):
        r += 1
    return r


small = st.lists(st.lists(st.integers(0, 4), min_size=3, max_size=3), min_size=1, max_size=4)


@given(small)
def test_rank_matches_enumeration(rows):
    assert oracle.rank_mod_p(rows, 5) == _brute_rank(rows, 5)


@given(small)
def test_rank_transpose_invariant(rows):
    A = np.array(rows)
    assert oracle.rank_mod_p(A, 5) == oracle.rank_mod_p(A.T, 5)
