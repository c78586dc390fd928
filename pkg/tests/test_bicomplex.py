"""Bicomplexes: totalization, three page routes, witnesses, cylinders, cones."""

import itertools

import pytest

from specseq.fields import GF, QQ
from specseq.bigraded import InvariantError, is_acyclic
from specseq.linalg import ExactMatrix, image
from specseq import bicomplex as bx
from specseq import cylinders as cyl
from specseq import filtered as flt
from specseq import randgen as rg

F2 = GF(2)
F5 = GF(5)


def spot(field, i, j, d=1):
    return bx.Bicomplex(field, {(i, j): d}, {}, {})


def test_tot_of_zero_and_of_d0():
    assert flt.is_zero(bx.tot(bx.zero_bicomplex(QQ)))
    T = bx.tot(bx.gen_D0(QQ, 0, 0))
    # already exact: every page vanishes from stage 1 on, hence H(Tot) = 0
    assert flt.page(T, 1).page.dims == {}
    assert flt.page(T, 2).page.dims == {}


def test_tot_differential_signs_give_chain_complex():
    rng = rg.make_rng(1)
    for _ in range(4):
        A = rg.random_bicomplex(rng, None, summands=3, max_r=2, span=1)
        T = bx.tot(A)  # constructor validates d.d = 0 and filtration compat
        assert flt.stabilization_bound(T) >= 1


def test_page0_is_the_bicomplex_with_d0():
    rng = rg.make_rng(2)
    A = rg.random_bicomplex(rng, F5, summands=2, max_r=2, span=1)
    pg = bx.page_direct(A, 0)
    assert pg.page.dims == dict(A.dims)
    for k in A.dims:
        assert pg.page.delta_at(*k) == A.d0_at(*k)


def test_generator_pages_match_paper():
    for r in (1, 2, 3, 4):
        Z = bx.gen_ZW(QQ, r, 0, 0)
        for route in ("direct", "witness", "tot"):
            if route == "direct":
                pg = bx.page_direct(Z, r).page
                nxt = bx.page_direct(Z, r + 1).page
            elif route == "witness":
                pg = bx.page_via_witness(Z, r).page
                nxt = bx.page_via_witness(Z, r + 1).page
            else:
                pg = flt.page(bx.tot(Z), r).page
                nxt = flt.page(bx.tot(Z), r + 1).page
            assert pg.dims == {(0, 0): 1, (-r, 1 - r): 1}
            assert pg.delta_at(0, 0).rank() == 1
            assert nxt.dims == {}
    assert bx.page_direct(bx.gen_D0(QQ, 0, 0), 1).page.dims == {}
    for r in (1, 2, 3):
        B = bx.gen_BW(QQ, r, 0, 0)
        assert bx.page_direct(B, r).page.dims == {}
        assert bx.page_via_witness(B, r).page.dims == {}


def test_witness_base_cases():
    rng = rg.make_rng(3)
    A = rg.random_bicomplex(rng, F5, summands=2, max_r=2, span=1)
    w = A.window()
    for (p, q) in ((w[0], w[2]), (w[1], w[3])):
        zw0 = bx.witness_cycles(A, 0, p, q)
        assert zw0.space.dim == A.dim(p, q)
        assert bx.witness_boundaries(A, 0, p, q).space.dim == 0
        bw1 = bx.witness_boundaries(A, 1, p, q)
        assert bw1.space.dim == A.dim(p, q)
        # b_1 = d_0
        assert bx.b_matrix(A, 1, p, q) == A.d0_at(p, q)


def test_bw_dimension_formula():
    rng = rg.make_rng(4)
    A = rg.random_bicomplex(rng, QQ, summands=2, max_r=2, span=1)
    w = A.window()
    for r in (2, 3):
        for (p, q) in ((w[0] + 1, w[2] + 1), (w[1], w[3])):
            bw = bx.witness_boundaries(A, r, p, q)
            nb = bx.witness_cycles(A, r - 1, p + r - 1, q + r - 1).space.dim
            nc = bx.witness_cycles(A, r - 1, p - 1, q).space.dim
            assert bw.space.dim == nb + A.dim(p, q) + nc


def test_zw2_enumeration_over_f2():
    A = rg.random_bicomplex(rg.make_rng(5), F2, summands=2, max_r=1, span=1, conjugate=False)
    w = A.window()
    p, q = w[1], w[3]
    d0a, d1a = A.dim(p, q), A.dim(p - 1, q - 1)
    if d0a + d1a > 10:
        pytest.skip("random instance too large for enumeration")
    zw = bx.witness_cycles(A, 2, p, q)
    members = []
    for bits in itertools.product((0, 1), repeat=d0a + d1a):
        a0, a1 = list(bits[:d0a]), list(bits[d0a:])
        if all(F2.is_zero(x) for x in A.d0_at(p, q).apply(a0)) and \
                A.d1_at(p, q).apply(a0) == A.d0_at(p - 1, q - 1).apply(a1):
            members.append(bits)
            assert zw.space.contains_vector(list(bits))
    assert len(members) == 2 ** zw.space.dim


def test_witness_and_direct_pages_isomorphic_via_z():
    rng = rg.make_rng(6)
    for _ in range(3):
        A = rg.random_bicomplex(rng, None, summands=2, max_r=2, span=1)
        for r in range(0, 3):
            pd, pw = bx.page_direct(A, r), bx.page_via_witness(A, r)
            assert pd.page.dims == pw.page.dims
            for (p, q), d in pd.page.dims.items():
                iso = pd.quot[(p, q)].project @ bx.z_matrix(A, r, p, q) @ pw.quot[(p, q)].lift
                assert iso.rank() == d


def test_three_route_agreement_with_morphisms():
    from specseq.suite import compare_three_routes, morphism_routes_agree

    rng = rg.make_rng(7)
    for _ in range(3):
        fld = rg.pick_field(rng)
        A = rg.random_bicomplex(rng, fld, summands=2, max_r=2, span=1)
        B = rg.random_bicomplex(rng, fld, summands=2, max_r=2, span=1)
        assert all(compare_three_routes(A, r) for r in range(0, 4))
        f = rg.random_bicomplex_morphism(rng, A, B)
        assert all(morphism_routes_agree(f, r) for r in range(0, 3))


def test_gen_zw_shapes():
    Z1 = bx.gen_ZW(QQ, 1, 0, 0)
    assert Z1.dims == {(0, 0): 1, (-1, 0): 1}
    assert Z1.d1_at(0, 0) == ExactMatrix.identity(QQ, 1)
    Z3 = bx.gen_ZW(QQ, 3, 0, 0)
    assert len(Z3.dims) == 6
    assert bx.gen_ZW(QQ, 0, 0, 0) == bx.gen_D0(QQ, 0, 0)
    with pytest.raises(InvariantError):
        bx.gen_BW(QQ, 0, 0, 0)


def test_hom_count_over_f2_bicomplex():
    from specseq.linalg import BlockLinearSystem

    A = rg.random_bicomplex(rg.make_rng(8), F2, summands=2, max_r=2, span=1)
    w = A.window()
    for r in (0, 1, 2):
        i, j = w[1], w[3]
        sysb = BlockLinearSystem(F2)
        bx.add_morphism_unknown(sysb, bx.gen_ZW(F2, r, i, j), A, "f")
        hom = sysb.kernel_space()
        zw = bx.witness_cycles(A, r, i, j)
        want = A.dim(i, j) if r == 0 else zw.space.dim
        assert 2 ** hom.dim == 2 ** want


def test_iota_corresponds_to_w():
    from specseq.suite import SuiteParams, check_bicx_representability

    rng = rg.make_rng(9)
    reports = check_bicx_representability(rng, SuiteParams(trials=2))
    assert all(r.passed for r in reports)


def test_retracts_and_pushout():
    from specseq.suite import SuiteParams, check_bw_pushout, check_bw_retracts

    rng = rg.make_rng(10)
    assert all(r.passed for r in check_bw_retracts(rng, SuiteParams(trials=3)))
    assert all(r.passed for r in check_bw_pushout(rng, SuiteParams(trials=3)))


def test_tensor_unit_and_cylinder_formulas():
    from specseq.suite import SuiteParams, check_tensor

    rng = rg.make_rng(11)
    assert all(r.passed for r in check_tensor(rng, SuiteParams(trials=3)))


def test_tensor_of_discs_has_no_e1():
    D = bx.tensor(bx.gen_D0(F5, 0, 0), bx.gen_D0(F5, 0, 0))
    assert D.total_dim() == 16
    assert bx.page_direct(D, 1).page.dims == {}


def test_cylinder_factors_the_fold_map():
    rng = rg.make_rng(12)
    A = rg.random_bicomplex(rng, QQ, summands=2, max_r=1, span=1)
    for r in (0, 1, 2):
        c = cyl.cylinder(A, r)
        left = bx.compose(c.proj, c.i_minus)
        right = bx.compose(c.proj, c.i_plus)
        for k in A.dims:
            assert left.block(*k) == bx.identity_morphism(A).block(*k)
            assert right.block(*k) == bx.identity_morphism(A).block(*k)


def test_cone_of_spot_is_staircase_and_c0_is_columnwise_cone():
    R = spot(QQ, 0, 0)
    for r in (1, 2, 3):
        assert cyl.cone(R, r).object == bx.gen_ZW(QQ, r, r, r - 1)
    # one-column bicomplex: C_0 is the usual cone of (A^{p,*}, d_0)
    A = bx.Bicomplex(QQ, {(0, 0): 1, (0, 1): 1}, {(0, 0): ExactMatrix.identity(QQ, 1)}, {})
    C = cyl.cone(A, 0).object
    assert set(C.dims) == {(0, -1), (0, 0), (0, 1)}
    # H(cone) = 0 since the column was already exact in the middle
    assert bx.page_direct(C, 1).page.dims == {}


def test_cone_page_vanishes_next_stage():
    rng = rg.make_rng(13)
    for r in (0, 1, 2, 3):
        A = rg.random_bicomplex(rng, None, summands=2, max_r=2, span=1)
        assert bx.page_direct(cyl.cone(A, r).object, r + 1).page.dims == {}


def test_contraction_small_cases():
    R = spot(QQ, 0, 0)
    for r in (0, 1, 2):
        H, cn = cyl.contraction(R, r)
        C = cn.object
        assert cyl.check_r_homotopy(C, r, H, bx.zero_morphism(C, C), bx.identity_morphism(C))
        cyl.unpack_homotopy(C, r, H)


def test_homotopy_from_components_passes_iff_consistent():
    rng = rg.make_rng(14)
    A = rg.random_bicomplex(rng, F5, summands=2, max_r=1, span=1)
    B = rg.random_bicomplex(rng, F5, summands=2, max_r=1, span=1)
    f = rg.random_bicomplex_morphism(rng, A, B)
    g = rg.random_bicomplex_morphism(rng, A, B)
    # all-zero components pass iff f = g
    H = cyl.assemble_homotopy(A, B, 1, f, g, {})
    same = all(f.block(*k) == g.block(*k) for k in A.dims)
    assert cyl.check_r_homotopy(A, 1, H, f, g) == same


def test_psi_surjectivity_and_cylinder_page():
    rng = rg.make_rng(15)
    A = rg.random_bicomplex(rng, F2, summands=2, max_r=2, span=1)
    for r in (0, 1, 2, 3):
        psi, _ = cyl.psi_r(A, r)
        assert all(bx.zw_map_surjective(psi, s) for s in range(r + 1))
    for r in (0, 1, 2):
        pg = bx.page_via_witness(cyl.gen_Cyl(QQ, r), r).page
        assert pg.dims == {(r, r - 1): 1, (0, 0): 2}
        one = QQ.one()
        assert pg.delta_at(r, r - 1).data == ((-one,), (one,))


def test_double_cylinder_closed_form_is_pushout():
    from specseq.suite import SuiteParams, check_double_cyl_pushout

    rng = rg.make_rng(16)
    assert all(r.passed for r in check_double_cyl_pushout(rng, SuiteParams(trials=3)))


def test_epi_and_mainobs():
    from specseq.suite import SuiteParams, check_epi_r, check_mainobs

    rng = rg.make_rng(17)
    assert all(r.passed for r in check_epi_r(rng, SuiteParams(trials=4)))
    assert all(r.passed for r in check_mainobs(rng, SuiteParams(trials=4)))


def test_delta_independent_of_witness_choice():
    from specseq.suite import SuiteParams, check_delta_choice_independence

    rng = rg.make_rng(18)
    assert all(r.passed for r in check_delta_choice_independence(rng, SuiteParams(trials=3)))


def test_desk_scale_instance():
    """A 6x6-window instance with spots up to dimension 6, through all routes."""
    from specseq.suite import compare_three_routes

    rng = rg.make_rng("desk-scale")
    base = bx.direct_sum(
        bx.direct_sum(bx.gen_ZW(F5, 2, 0, 0), bx.gen_D0(F5, 0, 0)),
        bx.direct_sum(bx.gen_ZW(F5, 1, 0, 0), bx.gen_BW(F5, 3, 1, 2)),
    )
    A = rg.conjugate_bicomplex(rng, cyl.cylinder(base, 2).object)
    w = A.window()
    assert (w[1] - w[0] + 1) >= 6 and (w[3] - w[2] + 1) >= 6
    assert max(A.dims.values()) >= 6
    for r in range(0, 5):
        assert _light_agree(A, r)
    assert compare_three_routes(A, 2)


def _light_agree(A, r):
    pd = bx.page_direct(A, r)
    pw = bx.page_via_witness(A, r)
    pt = flt.page(bx.tot(A), r)
    if not (pd.page.dims == pw.page.dims == pt.page.dims):
        return False
    rk = lambda pg: {k: m.rank() for k, m in pg.delta.items() if m.rank()}
    return rk(pd.page) == rk(pw.page) == rk(pt.page)
