"""Filtered complexes: pages, generators, shift/decalage, cones, homotopies."""

import itertools

import pytest

from specseq.fields import GF, QQ
from specseq.bigraded import InvariantError, cohomology, is_acyclic
from specseq.linalg import ExactMatrix
from specseq import filtered as flt
from specseq import randgen as rg

F2 = GF(2)
F5 = GF(5)


def test_zero_complex_pages_and_cycles():
    Z = flt.zero_complex(QQ)
    for r in range(3):
        assert flt.page(Z, r).page.dims == {}
        assert flt.z_subspace(Z, r, 0, 0).dim == 0
        assert flt.b_subspace(Z, r, 0, 0).dim == 0


def test_gen_z_weights_and_cycles():
    # weights 0 and -1 with the identity differential
    Z = flt.gen_Z(QQ, 0, 0, 1)
    assert Z.dims == {0: 1, 1: 1}
    assert Z.weights(0) == [0] and Z.weights(1) == [-1]
    assert Z.d(0) == ExactMatrix.identity(QQ, 1)
    # Z_1 at (p=0, n=0) is the full rank-1 space
    assert flt.z_subspace(Z, 1, 0, 0).dim == 1
    assert flt.z_subspace(Z, 0, 0, 0).dim == 1


def test_z_stabilization_oracle():
    rng = rg.make_rng(42)
    A = rg.random_filtered(rng, F5, summands=3, max_r=2, span=1)
    bound = flt.stabilization_bound(A)
    for n in A.degrees():
        for p in range(A.p_min, A.p_max + 1):
            stable = flt.z_subspace(A, bound, p, n)
            for r in range(bound + 1, bound + 3):
                assert flt.z_subspace(A, r, p, n) == stable
            assert flt.b_subspace(A, bound + 1, p, n) == flt.b_subspace(A, bound + 2, p, n)


def test_page_of_gen_z_two_spots_delta_iso():
    for r in (0, 1, 2, 3):
        Z = flt.gen_Z(F5, 1, -1, r)
        pg = flt.page(Z, r).page
        assert pg.dims == {(1, 0): 1, (1 - r, 1 - r): 1}
        assert pg.delta_at(1, 0).rank() == 1
        assert flt.page(Z, r + 1).page.dims == {}


def test_page_recursion_and_representatives():
    rng = rg.make_rng(3)
    A = rg.random_filtered(rng, QQ, summands=3, max_r=2, span=1)
    for r in range(0, 4):
        sp = flt.page(A, r)
        assert sp.page.dims == {k: d for k, d in cohomology(flt.page(A, max(r - 1, 0)).page).module.dims.items()} or r == 0
        for (p, q), qd in sp.quot.items():
            n = q - p
            if qd.dim == 0:
                continue
            # representatives are genuine r-cycles and project back to the identity
            Z = flt.z_subspace(A, r, p, n)
            for c in range(qd.dim):
                assert Z.contains_vector(qd.lift.col(c))
            assert (qd.project @ qd.lift) == ExactMatrix.identity(A.field, qd.dim)


def test_mr_page_acyclic_and_pi1():
    rng = rg.make_rng(4)
    for r in (0, 1, 2):
        A = rg.random_filtered(rng, F2, summands=2, max_r=2, span=1)
        M, pi1 = flt.m_r(A, r)
        assert is_acyclic(flt.page(M, r).page)
        for k in range(r + 1):
            assert flt.z_map_surjective(pi1, k)


def test_identity_and_j_generator_are_weqs():
    A = flt.gen_B(QQ, 0, 0, 2)
    for r in range(3):
        assert flt.is_er_quiso(flt.identity_morphism(A), r)
        assert flt.is_zr_quiso(flt.identity_morphism(A), r)
    for r in range(3):
        Z = flt.gen_Z(QQ, 0, 0, r)
        j = flt.FilteredMorphism(flt.zero_complex(QQ), Z, {})
        assert flt.is_er_quiso(j, r)
        if r:
            assert not flt.is_er_quiso(j, r - 1)


def test_shift_zero_is_identity_and_decs_compose():
    rng = rg.make_rng(5)
    A = rg.random_filtered(rng, F5, summands=2, max_r=2, span=1)
    assert flt.shift(A, 0) is A
    assert flt.decalage(A, 0) is A
    assert flt.canonicalize(flt.shift(A, 2)) == flt.canonicalize(flt.shift(flt.shift(A, 1), 1))
    assert flt.canonicalize(flt.decalage(A, 2)) == flt.canonicalize(flt.decalage(flt.decalage(A, 1), 1))


def test_dec_of_shift_is_identity():
    rng = rg.make_rng(6)
    for seed in range(4):
        A = rg.random_filtered(rng, None, summands=3, max_r=2, span=1)
        for r in (1, 2):
            assert flt.canonicalize(flt.decalage(flt.shift(A, r), r)) == flt.canonicalize(A)


def test_shift_page_reindexing():
    from specseq.suite import decalage_dims_match, shift_dims_match

    rng = rg.make_rng(7)
    for _ in range(3):
        A = rg.random_filtered(rng, None, summands=2, max_r=2, span=1)
        assert shift_dims_match(A, 3)
        assert decalage_dims_match(A, 2)


def test_rcone_of_identity_acyclic_and_zero_cone_is_source():
    rng = rg.make_rng(8)
    A = rg.random_filtered(rng, QQ, summands=2, max_r=1, span=1)
    for r in (0, 1, 2):
        C = flt.r_cone(flt.identity_morphism(A), r)
        assert is_acyclic(flt.page(C, r).page)
    inc = flt.zero_morphism(flt.zero_complex(QQ), A)
    for r in (0, 1):
        # the cone of 0 -> A is (A, -d); the alternating-sign map is the
        # canonical filtered isomorphism onto A
        C = flt.r_cone(inc, r)
        blocks = {}
        for n in C.degrees():
            if C.dim(n):
                m = ExactMatrix.identity(QQ, C.dim(n))
                blocks[n] = m if n % 2 == 0 else -m
        iso = flt.FilteredMorphism(C, A, blocks)
        assert all(iso.block(n).rank() == A.dim(n) for n in A.degrees())
        assert flt.page(C, r).page.dims == flt.page(A, r).page.dims


def test_rcone_detects_weq():
    rng = rg.make_rng(9)
    for t in range(4):
        r = t % 3
        f = rg.random_filtered_weq(rng, F5, r) if t % 2 == 0 else rg.random_filtered_morphism(
            rng,
            rg.random_filtered(rng, F5, summands=2, max_r=2, span=1),
            rg.random_filtered(rng, F5, summands=2, max_r=2, span=1),
        )
        assert flt.is_er_quiso(f, r) == is_acyclic(flt.page(flt.r_cone(f, r), r).page)


def test_homotopy_zero_certifies_reflexivity():
    rng = rg.make_rng(10)
    A = rg.random_filtered(rng, QQ, summands=2, max_r=1, span=1)
    B = rg.random_filtered(rng, QQ, summands=2, max_r=1, span=1)
    f = rg.random_filtered_morphism(rng, A, B)
    h = flt.FilteredHomotopy(1, A, B, {})
    assert flt.check_r_homotopy(h, f, f)
    assert flt.page_equality_under_homotopy(h, f, f)


def test_homotopy_forces_page_equality():
    rng = rg.make_rng(11)
    nontrivial = 0
    for t in range(6):
        r = t % 3
        fld = (F2, F5, QQ)[t % 3]
        A = rg.random_filtered(rng, fld, summands=2, max_r=2, span=1)
        B = rg.random_filtered(rng, fld, summands=2, max_r=2, span=1)
        f = rg.random_filtered_morphism(rng, A, B)
        h = rg.random_filtered_homotopy(rng, A, B, r)
        disp = rg.homotopy_displacement(h)
        if any(not m.is_zero() for m in disp.blocks.values()):
            nontrivial += 1
        g = flt.morphism_sum(f, disp)
        assert flt.check_r_homotopy(h, f, g)
        assert flt.page_equality_under_homotopy(h, f, g)
    assert nontrivial >= 2


def test_mr_contraction_certifies_id_homotopic_to_zero():
    rng = rg.make_rng(12)
    A = rg.random_filtered(rng, F5, summands=2, max_r=1, span=1)
    for r in (0, 1, 2):
        M, _ = flt.m_r(A, r)
        h = flt.contraction_of_m_r(A, r)
        assert flt.check_r_homotopy(h, flt.zero_morphism(M, M), flt.identity_morphism(M))
        assert flt.page_equality_under_homotopy(h, flt.zero_morphism(M, M), flt.identity_morphism(M))


def test_gen_b_is_sum_of_gen_z():
    for r in (1, 2, 3):
        B = flt.gen_B(QQ, 0, 0, r)
        expect = flt.direct_sum(flt.gen_Z(QQ, r - 1, -1, r - 1), flt.gen_Z(QQ, -1, 0, r - 1))
        assert B == expect
    with pytest.raises(InvariantError):
        flt.gen_B(QQ, 0, 0, 0)


def test_hom_count_over_f2():
    rng = rg.make_rng(13)
    A = rg.random_filtered(rng, F2, summands=2, max_r=2, span=1)
    for (p, n, r) in ((0, 0, 1), (1, 0, 2), (-1, 1, 0)):
        _sys, hom = flt.hom_solution_space(flt.gen_Z(F2, p, n, r), A)
        z = flt.z_subspace(A, r, p, n)
        assert 2 ** hom.dim == 2 ** z.dim
        _sysb, homb = flt.hom_solution_space(flt.gen_B(F2, p, n, r + 1), A)
        assert homb.dim == flt.z_subspace(A, r, p - 1, n).dim + flt.z_subspace(A, r, p + r, n - 1).dim


def test_phi_commutes_and_pushout_property():
    from specseq.suite import SuiteParams, check_fil_pushout

    rng = rg.make_rng(14)
    reports = check_fil_pushout(rng, SuiteParams(trials=3))
    assert all(r.passed for r in reports)


def test_generator_sets():
    window = (0, 1, 0, 0)
    for set_id, count in (("J", 2), ("I", 2), ("Jprime", 6), ("Iprime", 6), ("Isecond", 2), ("Jsecond", 2)):
        gens = flt.generators(QQ, set_id, 2, window)
        assert len(gens) == count
    with pytest.raises(InvariantError):
        flt.generators(QQ, "nope", 1, window)


def test_adjunction_solution_spaces_equal():
    rng = rg.make_rng(15)
    A = rg.random_filtered(rng, F5, summands=2, max_r=1, span=1)
    B = rg.random_filtered(rng, F5, summands=2, max_r=1, span=1)
    for r in (0, 1, 2):
        _s1, k1 = flt.hom_solution_space(flt.shift(A, r), B)
        _s2, k2 = flt.hom_solution_space(A, flt.decalage(B, r))
        assert k1 == k2
