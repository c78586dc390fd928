"""Exact linear algebra: canonical forms, set semantics, rank-nullity."""

import itertools

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from specseq.fields import GF, QQ
from specseq.linalg import (
    DimensionError,
    ExactMatrix,
    Subspace,
    image,
    kernel,
    preimage,
    quotient,
    rref,
    solve,
)

F2 = GF(2)
F5 = GF(5)


def M(field, data):
    return ExactMatrix.from_ints(field, data)


def test_rref_identity():
    ech, piv = rref(ExactMatrix.identity(QQ, 2))
    assert ech == ExactMatrix.identity(QQ, 2)
    assert piv == [0, 1]


def test_rref_zero():
    ech, piv = rref(ExactMatrix.zeros(QQ, 3, 2))
    assert ech == ExactMatrix.zeros(QQ, 3, 2)
    assert piv == []


def test_rref_rank_one():
    ech, piv = rref(M(QQ, [[2, 4], [1, 2]]))
    assert ech == M(QQ, [[1, 2], [0, 0]])
    assert piv == [0]


def test_kernel_of_identity_is_zero():
    assert kernel(ExactMatrix.identity(QQ, 3)).dim == 0


def test_image_of_zero_map_is_zero():
    assert image(ExactMatrix.zeros(QQ, 3, 2)).dim == 0


def test_solve_returns_canonical_representative():
    assert solve(M(QQ, [[1, 1]]), [Fraction(3)]) == (Fraction(3), Fraction(0))


def test_solve_inconsistent():
    assert solve(M(QQ, [[1], [1]]), [QQ.of(1), QQ.of(2)]) is None


def test_preimage_of_full_space():
    A = M(QQ, [[1, 2, 3]])
    assert preimage(A, Subspace.full(QQ, 1)) == Subspace.full(QQ, 3)


def test_intersect_self():
    U = image(M(QQ, [[1, 0], [1, 1], [0, 2]]))
    assert U.intersect(U) == U


def test_intersect_over_f2_matches_enumeration():
    U = image(M(F2, [[1], [1]]))
    V = image(M(F2, [[1], [0]]))
    W = U.intersect(V)
    members = [
        v
        for v in itertools.product(range(2), repeat=2)
        if U.contains_vector(v) and V.contains_vector(v)
    ]
    assert W.dim == 0
    assert members == [(0, 0)]


def test_quotient_by_self_and_by_zero():
    U = image(M(QQ, [[1, 0], [0, 1], [0, 0]]))
    assert quotient(U, U).dim == 0
    q = quotient(U, Subspace.zero(QQ, 3))
    assert q.dim == 2
    assert (q.project @ q.lift) == ExactMatrix.identity(QQ, 2)


def test_quotient_q2_by_diagonal():
    U = Subspace.full(QQ, 2)
    W = image(M(QQ, [[1], [1]]))
    q = quotient(U, W)
    assert q.dim == 1
    a = q.project.apply([QQ.of(1), QQ.of(0)])
    b = q.project.apply([QQ.of(0), QQ.of(-1)])
    assert a == b and a != (QQ.zero(),)


def test_quotient_rejects_non_subspace():
    U = image(M(QQ, [[1], [0]]))
    W = image(M(QQ, [[0], [1]]))
    with pytest.raises(DimensionError):
        quotient(U, W)


def test_dimension_mismatch_rejected():
    with pytest.raises(DimensionError):
        M(QQ, [[1, 2]]) @ M(QQ, [[1, 2]])
    with pytest.raises(DimensionError):
        Subspace.full(QQ, 2).plus(Subspace.full(QQ, 3))


@st.composite
def small_matrix(draw, field):
    r = draw(st.integers(0, 4))
    c = draw(st.integers(0, 4))
    data = draw(
        st.lists(
            st.lists(st.integers(-4, 4), min_size=c, max_size=c),
            min_size=r,
            max_size=r,
        )
    )
    m = ExactMatrix.from_ints(field, data)
    return m if r else ExactMatrix.zeros(field, 0, c)


@settings(max_examples=60, deadline=None)
@given(small_matrix(QQ))
def test_rank_nullity_q(m):
    assert kernel(m).dim + image(m).dim == m.cols


@settings(max_examples=60, deadline=None)
@given(small_matrix(F5))
def test_rank_nullity_f5(m):
    assert kernel(m).dim + image(m).dim == m.cols


@settings(max_examples=40, deadline=None)
@given(small_matrix(F2))
def test_rref_idempotent(m):
    ech, piv = rref(m)
    again, piv2 = rref(ech)
    assert again == ech and piv2 == piv


@settings(max_examples=40, deadline=None)
@given(small_matrix(F5), small_matrix(F5))
def test_sum_contains_both(a, b):
    n = 3
    U = image(ExactMatrix.from_ints(F5, [[(i * j + i) % 5 for j in range(a.cols)] for i in range(n)]))
    V = image(ExactMatrix.from_ints(F5, [[(i + j) % 5 for j in range(b.cols)] for i in range(n)]))
    S = U.plus(V)
    assert S.contains(U) and S.contains(V)
    assert U.contains(U.intersect(V)) and V.contains(U.intersect(V))


def test_quotient_project_lift_roundtrip_f2_enumeration():
    A = M(F2, [[1, 0, 1], [0, 1, 1], [0, 0, 0]])
    U = image(A)
    W = image(M(F2, [[1], [1], [0]]))
    q = quotient(U, W)
    assert q.dim == U.dim - W.dim
    assert (q.project @ q.lift) == ExactMatrix.identity(F2, q.dim)
    assert (q.project @ W.basis).is_zero()
    for v in itertools.product(range(2), repeat=3):
        if not U.contains_vector(v):
            continue
        cls = q.project.apply(v)
        rep = q.lift.apply(cls)
        diff = tuple(F2.sub(a, b) for a, b in zip(v, rep))
        assert W.contains_vector(diff)


def test_sum_and_preimage_match_enumeration_over_f2():
    U = image(M(F2, [[1, 0], [1, 1], [0, 0]]))
    V = image(M(F2, [[0], [1], [1]]))
    S = U.plus(V)
    members = [
        v for v in itertools.product(range(2), repeat=3)
        if any(
            all(F2.is_zero(F2.sub(a, F2.add(b, c))) for a, b, c in zip(v, u, w))
            for u in _enumerate(U) for w in _enumerate(V)
        )
    ]
    assert len(members) == 2 ** S.dim
    assert all(S.contains_vector(v) for v in members)

    A = M(F2, [[1, 1, 0], [0, 1, 1]])
    W = image(M(F2, [[1], [1]]))
    P = preimage(A, W)
    expected = [v for v in itertools.product(range(2), repeat=3) if W.contains_vector(A.apply(v))]
    assert len(expected) == 2 ** P.dim
    assert all(P.contains_vector(v) for v in expected)


def _enumerate(U):
    vecs = []
    for coeffs in itertools.product(range(2), repeat=U.dim):
        vecs.append(U.basis.apply([F2.of(c) for c in coeffs]))
    return vecs


def test_determinism_bit_identical():
    m = M(F5, [[1, 2, 3], [4, 0, 1], [2, 2, 2]])
    a = rref(m)
    b = rref(M(F5, [[1, 2, 3], [4, 0, 1], [2, 2, 2]]))
    assert a[0] == b[0] and a[1] == b[1]
    assert image(m) == image(M(F5, [[1, 2, 3], [4, 0, 1], [2, 2, 2]]))
