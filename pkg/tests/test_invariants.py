from __future__ import annotations

import json
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from tensortorsion import oracle
from tensortorsion.algebra import Ring, matrix_from_strings
from tensortorsion.bounds import tensor_of
from tensortorsion.corpus import CorpusSpec, cautionary2x2, maximal_ideal, random_module
from tensortorsion.homological import (
    ModulePres,
    dual_and_bidual,
    finite_support_part,
    free_resolution,
    torsion_free_quotient,
    torsion_submodule,
)
from tensortorsion.invariants import (
    InfiniteLengthError,
    basic_invariants,
    determinant,
    h0,
    h0_by_saturation,
    hdeg,
    hilbert_function,
    hilbert_series,
    invariant_set,
    krull_dim,
    length,
    local_cohomology_lengths,
    minors_ideal,
    multiplicity,
    predicates,
)


def quotient(R, *gens):
    return ModulePres.quotient_ring(R, [R.parse(g) for g in gens])


def bourbaki_xy(R2):
    return ModulePres.from_rows(R2, (0, 0), [["x"], ["y"]])


# --- Hilbert series -------------------------------------------------------------

def test_hilbert_series_examples(R2):
    hs = hilbert_series(ModulePres.free(R2))
    assert hs.numerator == {0: 1} and hs.dim == 2 and hs.degree == 1
    hs = hilbert_series(quotient(R2, "x", "y"))
    assert hs.dim == 0 and hs.degree == 1
    hs = hilbert_series(cautionary2x2(1))
    assert hs.dim == 1 and hs.degree == 2


def test_zero_module_series(R2):
    hs = hilbert_series(ModulePres.zero(R2))
    assert hs.dim == -1 and hs.degree == 0 and hs.value(3) == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_series_values_match_oracle(n):
    P = cautionary2x2(n)
    hs = hilbert_series(P)
    for t in range(-1, 3 * n + 3):
        expect = oracle.cokernel_hilbert_function(P.matrix, t)
        assert hs.value(t) == expect == hilbert_function(P, t)


def test_length_of_positive_dimensional_module_raises(R2):
    with pytest.raises(InfiniteLengthError):
        length(quotient(R2, "x"))


# --- basic invariants --------------------------------------------------------------

def test_basic_invariants_examples(R2):
    b = basic_invariants(quotient(R2, "x", "y"))
    assert (b.deg, b.reg, b.depth, b.pd, b.dim) == (1, 0, 0, 2, 0)
    b = basic_invariants(quotient(R2, "x^2", "y^2"))
    assert (b.deg, b.reg) == (4, 2)
    b = basic_invariants(maximal_ideal(2))
    assert (b.nu, b.alpha, b.deg, b.depth, b.reg) == (2, 1, 1, 1, 1)


def test_zero_module_invariants(R2):
    b = basic_invariants(ModulePres.zero(R2))
    assert b == basic_invariants(ModulePres.from_rows(R2, (0,), [["1"]]))
    assert (b.deg, b.nu, b.alpha, b.dim, b.depth, b.pd, b.reg) == (0, 0, 0, 0, 0, 0, None)
    inv = json.loads(invariant_set(ModulePres.zero(R2)).to_json())
    assert inv["reg"] is None and inv["hdeg"] == 0


# --- local cohomology and hdeg ----------------------------------------------------------

def test_local_cohomology_examples(R2):
    assert local_cohomology_lengths(quotient(R2, "x", "y")) == [1, 0]
    assert local_cohomology_lengths(maximal_ideal(2)) == [0, 1]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_h0_of_cautionary_square(n):
    A = cautionary2x2(n)
    T = tensor_of(A, A)
    assert h0(T) == 2 * n
    assert h0_by_saturation(T) == 2 * n


def test_infinite_local_cohomology_raises(R2):
    # R/(x) has Ext^1 of dimension one, so h_1 is infinite
    with pytest.raises(InfiniteLengthError):
        local_cohomology_lengths(quotient(R2, "x"), [1])
    assert local_cohomology_lengths(quotient(R2, "x"), [0]) == [0]


def test_hdeg_examples(R2):
    assert hdeg(ModulePres.free(R2)) == 1
    assert hdeg(quotient(R2, "x", "y")) == 1
    assert hdeg(maximal_ideal(2)) == 2
    assert hdeg(bourbaki_xy(R2)) == 2


def test_hdeg_of_maximal_ideal_in_three_variables():
    # deg 1 plus weight 2 on Ext^2(m) of length 1
    assert hdeg(maximal_ideal(3)) == 3


def test_invariant_set_of_maximal_ideal():
    inv = json.loads(invariant_set(maximal_ideal(2)).to_json())
    assert inv == {"deg": 1, "nu": 2, "alpha": 1, "dim": 2, "depth": 1, "pd": 1, "reg": 1,
                   "h": [0, 1], "hdeg": 2, "betti": [2, 1]}


def test_invariant_set_marks_infinite_h(R2):
    inv = invariant_set(quotient(R2, "x"))
    assert inv.h == (0, None)


# --- minors and predicates ------------------------------------------------------------------

def test_minors_examples(R2):
    for n in (1, 3):
        M = cautionary2x2(n).matrix
        gens = {g[0] for g in minors_ideal(M, 1).generators}
        assert gens == {R2.parse("x"), R2.parse(f"y^{n}")}
        assert {g[0] for g in minors_ideal(M, 2).generators} == {R2.parse("x^2")}
    Z = matrix_from_strings(R2, (1, 1), (0, 0), [["0", "0"], ["0", "0"]])
    assert minors_ideal(Z, 1).is_zero()
    with pytest.raises(ValueError):
        minors_ideal(Z, 3)


def test_determinant(R2):
    rows = [[R2.parse(s) for s in r] for r in (["x", "y"], ["y", "x"])]
    assert determinant(R2, rows) == R2.parse("x^2 - y^2")


def test_predicates_examples(R2):
    p = predicates(maximal_ideal(2))
    assert p.is_torsionfree and p.is_vector_bundle and not p.is_cm
    p = predicates(cautionary2x2(2))
    assert not p.is_torsionfree and p.is_cm
    p = predicates(quotient(R2, "x", "y"))
    assert p.is_vector_bundle and not p.is_torsionfree and p.is_equigenerated_deg0


# --- properties over random corpora ---------------------------------------------------------------

seeds = st.integers(min_value=0, max_value=2 ** 32)
dims = st.sampled_from([2, 3])
kinds = st.sampled_from(["general", "torsionfree", "dim1_square"])


def corpus_module(seed, d, kind):
    return random_module(CorpusSpec(seed=seed, count=1, d=d, kind=kind, max_rank=2, max_degree=2))[0]


@given(seeds, dims, kinds)
def test_auslander_buchsbaum_and_depth(seed, d, kind):
    P = corpus_module(seed, d, kind)
    b = basic_invariants(P)
    assert b.depth + b.pd == d
    assert b.depth <= b.dim


@given(seeds, dims, kinds)
def test_h0_two_routes_agree(seed, d, kind):
    P = corpus_module(seed, d, kind)
    assert h0(P) == h0_by_saturation(P)


@given(seeds, dims, kinds)
def test_hdeg_splits_off_finite_support(seed, d, kind):
    P = corpus_module(seed, d, kind)
    fs = finite_support_part(P)
    assert hdeg(P) == length(fs.finite_part) + hdeg(fs.quotient)


@given(seeds, dims, kinds)
def test_hdeg_equals_deg_when_cohen_macaulay(seed, d, kind):
    P = corpus_module(seed, d, kind)
    if predicates(P).is_cm:
        assert hdeg(P) == multiplicity(P)


@given(seeds, dims, kinds)
def test_betti_numbers_bounded_by_hdeg(seed, d, kind):
    P = corpus_module(seed, d, kind)
    _, bt = free_resolution(P)
    h = hdeg(P)
    assert all(bt.beta(i) <= h * comb(d, i) for i in range(d + 1))


@given(seeds, dims, kinds)
def test_regularity_below_hdeg_plus_alpha(seed, d, kind):
    P = corpus_module(seed, d, kind)
    b = basic_invariants(P)
    assert b.reg < hdeg(P) + b.alpha


@settings(max_examples=60)
@given(seeds)
def test_torsion_sequence_additivity(seed):
    P = corpus_module(seed, 2, "general")
    T = torsion_submodule(P)
    if krull_dim(P) == 2 and krull_dim(T) == 1 and h0(P) == 0:
        Q = torsion_free_quotient(P)
        assert hdeg(P) == multiplicity(T) + hdeg(Q)
        assert basic_invariants(T).reg <= basic_invariants(P).reg


def _reflexive_parts(P):
    data = dual_and_bidual(P)
    return hdeg(data.bidual), hdeg(data.cokernel)


@given(seeds, dims, st.sampled_from(["torsionfree", "vector_bundle_bv"]))
def test_reflexive_hull_additivity(seed, d, kind):
    P = corpus_module(seed, d, kind)
    p = predicates(P)
    if p.is_torsionfree and p.is_vector_bundle:
        hb, hc = _reflexive_parts(P)
        assert hdeg(P) == hb + (d - 1) * hc


def test_unweighted_reflexive_additivity_fails_for_maximal_ideal():
    m2, m3 = maximal_ideal(2), maximal_ideal(3)
    assert hdeg(m2) == sum(_reflexive_parts(m2))
    hb, hc = _reflexive_parts(m3)
    assert (hdeg(m3), hb, hc) == (3, 1, 1)
    assert hdeg(m3) != hb + hc


def test_torsion_sequence_additivity_sweep():
    hits = 0
    for seed in range(200):
        P = corpus_module(seed, 2, "general")
        T = torsion_submodule(P)
        if krull_dim(P) == 2 and krull_dim(T) == 1 and h0(P) == 0:
            hits += 1
            assert hdeg(P) == multiplicity(T) + hdeg(torsion_free_quotient(P))
    assert hits >= 10
