from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geomkit.gflinear import (
    GF,
    InputError,
    SubspaceBasis,
    contains,
    enumerate_subspaces,
    gaussian_count,
    intersect,
    rref,
    subspace_sum,
    subspaces_of,
    zero_subspace,
)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9])
def test_field_axioms_exhaustive(q):
    f = GF(q)
    elems = range(q)
    for a in elems:
        assert f.add(a, 0) == a
        assert f.mul(a, 1) == a
        assert f.add(a, f.neg(a)) == 0
        if a:
            assert f.mul(a, f.inv(a)) == 1
    for a in elems:
        for b in elems:
            assert f.add(a, b) == f.add(b, a)
            assert f.mul(a, b) == f.mul(b, a)
            for c in elems:
                assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
                assert f.add(a, f.add(b, c)) == f.add(f.add(a, b), c)
                assert f.mul(a, f.mul(b, c)) == f.mul(f.mul(a, b), c)


def test_unsupported_order_rejected():
    with pytest.raises(InputError):
        GF(11)
    with pytest.raises(InputError):
        GF(6)


def test_rref_forced_example():
    # Row reduction of {(1,1,0),(0,1,1)} over F_2 is forced.
    b = rref(GF(2), 3, [(1, 1, 0), (0, 1, 1)])
    assert b.row_vectors() == ((1, 0, 1), (0, 1, 1))


def test_rref_empty_is_zero_subspace():
    b = rref(GF(2), 4, [])
    assert b.dim == 0
    assert b == zero_subspace(GF(2), 4)


def test_rref_idempotent():
    b = rref(GF(2), 5, [(1, 0, 1, 1, 0), (0, 1, 1, 0, 1), (1, 1, 0, 1, 1)])
    again = rref(GF(2), 5, list(b.row_vectors()) + list(b.row_vectors()))
    assert again == b


def test_rref_dimension_mismatch():
    with pytest.raises(InputError):
        rref(GF(2), 3, [(1, 0, 1, 1)])
    with pytest.raises(InputError):
        rref(GF(3), 3, [(1, 0)])


@given(
    st.lists(st.integers(min_value=1, max_value=63), min_size=1, max_size=6),
    st.randoms(use_true_random=False),
)
@settings(max_examples=200, deadline=None)
def test_canonicity_under_regeneration(vecs, rng):
    """Any two generating sets of the same subspace give identical bases."""
    f = GF(2)
    b = rref(f, 6, vecs)
    span = b.vectors()
    gens = [rng.choice(span) for _ in range(rng.randint(1, 8))]
    # keep the span: a shuffled basis, each row perturbed by earlier rows only
    rows = list(b.rows)
    rng.shuffle(rows)
    for i, r in enumerate(rows):
        noise = 0
        for earlier in rows[:i]:
            if rng.random() < 0.5:
                noise ^= earlier
        gens.append(r ^ noise)
    assert rref(f, 6, gens) == b


@given(st.integers(min_value=0, max_value=2**12 - 1), st.integers(min_value=0, max_value=2**12 - 1))
@settings(max_examples=150, deadline=None)
def test_modular_law_of_dimensions(seed_u, seed_w):
    f = GF(2)
    rng = random.Random((seed_u << 12) | seed_w)
    U = rref(f, 6, [rng.randrange(1, 64) for _ in range(rng.randint(1, 4))])
    W = rref(f, 6, [rng.randrange(1, 64) for _ in range(rng.randint(1, 4))])
    s = subspace_sum(U, W)
    i = intersect(U, W)
    assert s.dim + i.dim == U.dim + W.dim
    assert contains(s, U) and contains(s, W)
    assert contains(U, i) and contains(W, i)


def test_sum_identities():
    f = GF(2)
    U = rref(f, 5, [(1, 0, 1, 0, 0), (0, 1, 0, 1, 0)])
    assert subspace_sum(U, zero_subspace(f, 5)) == U
    assert subspace_sum(U, U) == U


def test_sum_of_disjoint_2subspaces_rank4():
    # Two random disjoint 2-subspaces of F_2^6 span a 4-space; verified by
    # the rank of the stacked matrix.
    f = GF(2)
    rng = random.Random(7)
    found = 0
    while found < 20:
        U = rref(f, 6, [rng.randrange(1, 64) for _ in range(2)])
        W = rref(f, 6, [rng.randrange(1, 64) for _ in range(2)])
        if U.dim == 2 and W.dim == 2 and intersect(U, W).dim == 0:
            assert subspace_sum(U, W).dim == 4
            found += 1


def test_intersect_identities():
    f = GF(2)
    U = rref(f, 4, [(1, 1, 0, 0), (0, 0, 1, 1)])
    assert intersect(U, U) == U
    assert intersect(U, zero_subspace(f, 4)).dim == 0


def test_intersect_two_hyperplanes_of_f2_4():
    # Two distinct hyperplanes of F_2^4 meet in a 2-subspace; oracle is
    # enumeration of the vectors common to both.
    f = GF(2)
    hyps = [b for b in enumerate_subspaces(f, 4, 3)]
    H1, H2 = hyps[0], hyps[5]
    assert H1 != H2
    got = intersect(H1, H2)
    common = sorted(set(H1.vectors()) & set(H2.vectors()))
    assert got.dim == 2
    assert sorted(got.vectors()) == common


def test_intersect_generic_field():
    f = GF(3)
    U = rref(f, 3, [(1, 0, 1), (0, 1, 2)])
    W = rref(f, 3, [(1, 1, 0), (0, 0, 1)])
    I = intersect(U, W)
    expect = sorted(set(map(tuple, U.vectors())) & set(map(tuple, W.vectors())))
    assert sorted(map(tuple, I.vectors())) == expect
    S = subspace_sum(U, W)
    assert S.dim + I.dim == U.dim + W.dim


def test_contains():
    f = GF(2)
    U = rref(f, 4, [(1, 0, 1, 0), (0, 1, 0, 1)])
    assert contains(U, U)
    assert contains(U, zero_subspace(f, 4))
    line_in = rref(f, 4, [(1, 1, 1, 1)])
    line_out = rref(f, 4, [(1, 0, 0, 0)])
    assert contains(U, line_in)
    assert not contains(U, line_out)


@pytest.mark.parametrize(
    "n,d,q,expect",
    [(6, 3, 2, 1395), (6, 4, 2, 651), (4, 2, 2, 35), (7, 4, 2, 11811), (5, 5, 3, 1)],
)
def test_gaussian_count(n, d, q, expect):
    assert gaussian_count(n, d, q) == expect


def test_gaussian_duality():
    assert gaussian_count(7, 4, 2) == gaussian_count(7, 3, 2)


@pytest.mark.parametrize("n,d", [(4, 0), (4, 1), (4, 2), (4, 3), (5, 2), (6, 3)])
def test_enumeration_count_and_uniqueness(n, d):
    f = GF(2)
    seen = set(enumerate_subspaces(f, n, d))
    assert len(seen) == gaussian_count(n, d, 2)


def test_enumeration_count_q3():
    f = GF(3)
    seen = set(enumerate_subspaces(f, 4, 2))
    assert len(seen) == gaussian_count(4, 2, 3)


def test_enumeration_rejects_bad_dim():
    with pytest.raises(InputError):
        list(enumerate_subspaces(GF(2), 3, 4))


def test_enumeration_completeness_bruteforce_n4():
    """All spans of subsets of F_2^4 reproduce exactly the enumerated set."""
    f = GF(2)
    vecs = list(range(1, 16))
    spans = set()
    for r in range(5):
        for sub in itertools.combinations(vecs, r):
            spans.add(rref(f, 4, sub))
    enumerated = set()
    for d in range(5):
        enumerated.update(enumerate_subspaces(f, 4, d))
    assert spans == enumerated


def test_enumeration_completeness_bruteforce_n5():
    # Bounded generating sets suffice: every subspace of F_2^5 is spanned
    # by at most 5 vectors.
    f = GF(2)
    vecs = list(range(1, 32))
    spans = set()
    for r in range(3):
        for sub in itertools.combinations(vecs, r):
            spans.add(rref(f, 5, sub))
    enumerated = set()
    for d in range(3):
        enumerated.update(enumerate_subspaces(f, 5, d))
    assert {s for s in spans if s.dim < 3} == enumerated


def test_subspaces_of_lifting():
    f = GF(2)
    big = rref(f, 6, [(1, 0, 0, 1, 0, 0), (0, 1, 0, 0, 1, 0), (0, 0, 1, 0, 0, 1)])
    subs = list(subspaces_of(big, 2))
    assert len(subs) == gaussian_count(3, 2, 2)
    assert len(set(subs)) == len(subs)
    for s in subs:
        assert s.dim == 2 and contains(big, s)


def test_canonical_order_key():
    f = GF(2)
    all2 = sorted(enumerate_subspaces(f, 4, 2), key=lambda b: b.key())
    assert len(all2) == 35
    assert all(a.key() < b.key() for a, b in zip(all2, all2[1:]))


def test_hex_round_trip_form():
    f = GF(2)
    b = rref(f, 6, [(1, 0, 1, 0, 1, 0), (0, 1, 0, 1, 0, 1)])
    text = b.to_hex()
    rows = [int(line, 16) for line in text.splitlines()]
    assert rref(f, 6, rows) == b
