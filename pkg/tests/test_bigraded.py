"""r-bigraded complexes: cohomology, translation, cone, quasi-isomorphisms."""

import random

import pytest

from specseq.fields import GF, QQ
from specseq.bigraded import (
    BigradedMorphism,
    InvariantError,
    RBigradedComplex,
    cohomology,
    cone,
    compose,
    identity_morphism,
    is_acyclic,
    is_quasi_iso,
    translation,
    zero_morphism,
)
from specseq.linalg import ExactMatrix

F5 = GF(5)


def spot(field, r, p, q, d=1):
    return RBigradedComplex(field, r, {(p, q): d}, {})


def two_term(field, r, p, q, mat):
    """delta_r : A^{p,q} -> A^{p-r,q+1-r} given by mat."""
    tp, tq = p - r, q + 1 - r
    dims = {(p, q): mat.cols, (tp, tq): mat.rows}
    return RBigradedComplex(field, r, dims, {(p, q): mat})


def test_zero_complex_has_zero_cohomology():
    A = RBigradedComplex(QQ, 1, {}, {})
    assert cohomology(A).module.dims == {}
    assert is_acyclic(A)


def test_identity_delta_is_exact():
    A = two_term(QQ, 1, 0, 0, ExactMatrix.identity(QQ, 1))
    assert is_acyclic(A)


def test_zero_delta_has_full_cohomology():
    A = two_term(QQ, 1, 0, 0, ExactMatrix.zeros(QQ, 1, 1))
    H = cohomology(A)
    assert H.dim(0, 0) == 1 and H.dim(-1, 0) == 1


def test_delta_squared_checked():
    dims = {(0, 0): 1, (-1, 0): 1, (-2, 0): 1}
    one = ExactMatrix.identity(QQ, 1)
    with pytest.raises(InvariantError):
        RBigradedComplex(QQ, 1, dims, {(0, 0): one, (-1, 0): one})


def test_translation_moves_spot():
    A = spot(QQ, 1, 0, 0)
    T = translation(A)
    assert T.dims == {(1, 0): 1}
    TT = translation(T)
    assert TT.dims == {(2, 0): 1}


def test_translation_of_zero():
    A = RBigradedComplex(QQ, 2, {}, {})
    assert translation(A).dims == {}


def test_cone_of_identity_is_acyclic():
    A = spot(QQ, 1, 0, 0, 2)
    assert is_acyclic(cone(identity_morphism(A)))


def test_cone_of_zero_map_to_zero_is_translation():
    A = two_term(F5, 1, 0, 0, ExactMatrix.from_ints(F5, [[2]]))
    Z = RBigradedComplex(F5, 1, {}, {})
    C = cone(zero_morphism(A, Z))
    T = translation(A)
    assert C.dims == T.dims
    assert all(C.delta_at(*k) == T.delta_at(*k) for k in C.dims)


def test_quasi_iso_identity_and_zero():
    A = spot(QQ, 0, 0, 0)
    assert is_quasi_iso(identity_morphism(A))
    Z = RBigradedComplex(QQ, 0, {}, {})
    assert not is_quasi_iso(zero_morphism(Z, A))


def test_projection_of_exact_pair_is_quasi_iso():
    A = two_term(QQ, 1, 0, 0, ExactMatrix.identity(QQ, 1))
    Z = RBigradedComplex(QQ, 1, {}, {})
    f = zero_morphism(A, Z)
    assert is_quasi_iso(f)
    assert is_acyclic(cone(f))


def _random_complex(rng, field, r):
    dims = {}
    for p in range(-1, 2):
        for q in range(-1, 2):
            d = rng.randrange(0, 3)
            if d:
                dims[(p, q)] = d
    # a valid differential: compose "up" maps so that delta^2 = 0 by rank-drop
    delta = {}
    for (p, q), d in dims.items():
        tp, tq = p - r, q + 1 - r
        td = dims.get((tp, tq), 0)
        if td == 0:
            continue
        # use a rank<=1 map built from outer product; delta^2 rarely zero else
        col = [field.of(rng.randrange(0, 3)) for _ in range(td)]
        row = [field.of(rng.randrange(0, 2)) for _ in range(d)]
        delta[(p, q)] = ExactMatrix(field, [[field.mul(c, rr) for rr in row] for c in col])
    try:
        return RBigradedComplex(field, r, dims, delta)
    except InvariantError:
        return None


def test_quasi_iso_iff_cone_acyclic_random():
    rng = random.Random(7)
    found = 0
    while found < 12:
        A = _random_complex(rng, F5, 1)
        if A is None:
            continue
        found += 1
        f = identity_morphism(A)
        # twist by a random automorphism at one spot to stay a morphism
        assert is_quasi_iso(f) == is_acyclic(cone(f))
        z = zero_morphism(RBigradedComplex(F5, 1, {}, {}), A)
        assert is_quasi_iso(z) == is_acyclic(cone(z))


def test_cohomology_invariant_under_bidegree_preserving_iso():
    rng = random.Random(3)
    A = two_term(F5, 2, 1, 1, ExactMatrix.from_ints(F5, [[1, 2], [2, 4]]))
    dimsB = dict(A.dims)
    iso_blocks = {}
    for k, d in dimsB.items():
        while True:
            m = ExactMatrix.from_ints(F5, [[rng.randrange(5) for _ in range(d)] for _ in range(d)])
            if m.rank() == d:
                iso_blocks[k] = m
                break
    deltaB = {}
    for (p, q), blk in A.delta.items():
        tp, tq = A.target(p, q)
        deltaB[(p, q)] = iso_blocks[(tp, tq)] @ blk @ iso_blocks[(p, q)].inverse()
    B = RBigradedComplex(F5, 2, dimsB, deltaB)
    HA, HB = cohomology(A), cohomology(B)
    assert HA.module.dims == HB.module.dims
    f = BigradedMorphism(A, B, iso_blocks)
    assert is_quasi_iso(f)


def test_compose_and_two_of_three_shape():
    A = spot(QQ, 1, 0, 0)
    f = identity_morphism(A)
    assert is_quasi_iso(compose(f, f))
