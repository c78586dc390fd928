"""Acceptance criteria: exact (tolerance-zero) properties over exact fields.

Each test prints one PASS/FAIL line. Any failure writes a replayable
counterexample document under tests/_counterexamples/ and fails the build.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

import pytest

from specseq.fields import GF, QQ
from specseq.bigraded import cohomology
from specseq import bicomplex as bx
from specseq import cylinders as cyl
from specseq import docio
from specseq import filtered as flt
from specseq import model
from specseq import randgen as rg
from specseq import suite as suite_mod

F2, F5, F101 = GF(2), GF(5), GF(101)
FIELD_CYCLE = (F2, F5, F2, F101, F5, QQ, F2, F5)

HERE = Path(__file__).parent
CE_DIR = HERE / "_counterexamples"


def _field(k: int):
    return FIELD_CYCLE[k % len(FIELD_CYCLE)]


def _announce(num: int, desc: str, passed: bool):
    status = "PASS" if passed else "FAIL"
    print(f"{status} criterion {num}: {desc}")


def _fail(num: int, desc: str, **objs):
    CE_DIR.mkdir(exist_ok=True)
    payload = model._counterexample(f"criterion-{num}", **objs)
    path = CE_DIR / f"criterion_{num}.json"
    path.write_text(json.dumps(payload, indent=2))
    _announce(num, desc, False)
    raise AssertionError(f"criterion {num} failed; counterexample at {path}")


def test_criterion_1_generator_pages():
    desc = "generator pages: E_r(ZW_r) two spots with invertible delta, E_{r+1}=0, E_1(D0)=0, E_r(BW_r)=0"
    for r in (1, 2, 3, 4):
        for idx, (i, j) in enumerate((a, b) for a in (-1, 0, 1) for b in (-1, 0, 1)):
            fld = _field(r + idx)
            Z = bx.gen_ZW(fld, r, i, j)
            pg = bx.page_direct(Z, r).page
            if pg.dims != {(i, j): 1, (i - r, j + 1 - r): 1}:
                _fail(1, desc, object=Z, r=r)
            blk = pg.delta.get((i, j))
            if blk is None or blk.rank() != 1:
                _fail(1, desc, object=Z, r=r)
            if bx.page_direct(Z, r + 1).page.dims != {}:
                _fail(1, desc, object=Z, r=r)
            D = bx.gen_D0(fld, i, j)
            if bx.page_direct(D, 1).page.dims != {}:
                _fail(1, desc, object=D)
            B = bx.gen_BW(fld, r, i, j)
            if bx.page_direct(B, r).page.dims != {} or bx.page_via_witness(B, r).page.dims != {}:
                _fail(1, desc, object=B, r=r)
    _announce(1, desc, True)


def _light_three_route_agree(A: bx.Bicomplex, r: int) -> bool:
    pd = bx.page_direct(A, r)
    pw = bx.page_via_witness(A, r)
    pt = flt.page(bx.tot(A), r)
    if not (pd.page.dims == pw.page.dims == pt.page.dims):
        return False
    rk = lambda pg: {k: m.rank() for k, m in pg.delta.items() if m.rank()}
    return rk(pd.page) == rk(pw.page) == rk(pt.page)


def test_criterion_2_three_oracle_agreement():
    desc = "three-oracle page agreement on 200 seeded random bicomplexes"
    rng = rg.make_rng("acceptance-2")
    for t in range(200):
        fld = _field(t)
        A = rg.random_bicomplex(rng, fld, summands=1 + t % 3, max_r=2 + t % 2, span=1 + (t % 7 == 0))
        w = A.window()
        bound = (w[1] - w[0] + 1) + 1 if A.dims else 1
        for r in range(0, bound + 1):
            if not _light_three_route_agree(A, r):
                _fail(2, desc, object=A, r=r, trial=t)
    _announce(2, desc, True)


def test_criterion_3_page_recursion():
    desc = "page recursion: dims of page r+1 equal cohomology dims of page r, r <= 4"
    rng = rg.make_rng("acceptance-3")
    for t in range(100):
        fld = _field(t)
        A = rg.random_filtered(rng, fld, summands=1 + t % 3, max_r=2, span=1)
        for r in range(0, 5):
            got = flt.page(A, r + 1).page.dims
            want = cohomology(flt.page(A, r).page).module.dims
            if got != want:
                _fail(3, desc, object=A, r=r, trial=t)
        B = rg.random_bicomplex(rng, fld, summands=1 + t % 2, max_r=2, span=1)
        for r in range(0, 5):
            got = bx.page_direct(B, r + 1).page.dims
            want = cohomology(bx.page_direct(B, r).page).module.dims
            if got != want:
                _fail(3, desc, object=B, r=r, trial=t)
    _announce(3, desc, True)


def test_criterion_4_dec_of_shift_identity_and_reindexing():
    desc = "Dec.S = 1 byte-identical after canonicalization; shift/decalage page reindexing"
    rng = rg.make_rng("acceptance-4")
    for t in range(200):
        fld = _field(t)
        A = rg.random_filtered(rng, fld, summands=1 + t % 3, max_r=2, span=1)
        for r in (1, 2, 3):
            left = docio.emit_document(docio.object_document(flt.canonicalize(flt.decalage(flt.shift(A, r), r))))
            right = docio.emit_document(docio.object_document(flt.canonicalize(A)))
            if left != right:
                _fail(4, desc, object=A, r=r, trial=t)
        if t % 2 == 0:
            if not suite_mod.shift_dims_match(A, 3):
                _fail(4, desc, object=A, part="shift-dims", trial=t)
            if not suite_mod.decalage_dims_match(A, 2):
                _fail(4, desc, object=A, part="decalage-dims", trial=t)
    _announce(4, desc, True)


def test_criterion_5_ffund_and_epi_r():
    desc = "L:ffund and epi_r equivalences on 500 random morphisms each, k <= r <= 3"
    rng = rg.make_rng("acceptance-5")
    for t in range(500):
        fld = _field(t)
        kind = t % 3
        if kind == 0:
            f = rg.random_filtered_fibration(rng, fld, 1 + t % 3, trivial=t % 2 == 0, summands=1 + t % 2)
        elif kind == 1:
            f = rg.random_filtered_weq(rng, fld, t % 3, summands=1)
        else:
            A = rg.random_filtered(rng, fld, summands=1 + t % 2, max_r=2, span=1)
            B = rg.random_filtered(rng, fld, summands=1 + t % 2, max_r=2, span=1)
            f = rg.random_filtered_morphism(rng, A, B)
        for r in range(0, 4):
            zs_r = flt.z_map_surjective(f, r)
            lhs = zs_r and flt.z_map_surjective(f, r + 1)
            rhs = zs_r and flt.e_map_surjective(f, r + 1)
            if lhs != rhs:
                _fail(5, desc, morphism=f, r=r, part="ffund", trial=t)
    for t in range(500):
        fld = _field(t + 1)
        kind = t % 3
        if kind == 0:
            g = rg.random_bicomplex_fibration(rng, fld, 1 + t % 3, trivial=t % 2 == 0, summands=1)
        elif kind == 1:
            g = rg.random_bicomplex_weq(rng, fld, t % 3, summands=1)
        else:
            A = rg.random_bicomplex(rng, fld, summands=1 + t % 2, max_r=2, span=1)
            B = rg.random_bicomplex(rng, fld, summands=1 + t % 2, max_r=2, span=1)
            g = rg.random_bicomplex_morphism(rng, A, B)
        zw = [bx.zw_map_surjective(g, k) for k in range(4)]
        zz = [bx.z_map_surjective(g, k) for k in range(4)]
        ee = [bx.e_map_surjective(g, k) for k in range(4)]
        for r in range(4):
            a, b, c = all(zw[: r + 1]), all(zz[: r + 1]), all(ee[: r + 1])
            if not (a == b == c):
                _fail(5, desc, morphism=g, r=r, part="epi_r", trial=t)
    _announce(5, desc, True)


def test_criterion_6_characterization_propositions():
    desc = "lifting-solver verdicts match closed-form classifiers on 200 morphisms per category"
    rng = rg.make_rng("acceptance-6")
    structures_f = ("Ar", "Ar", "Ar", "Br", "Cr")
    for t in range(200):
        fld = _field(t)
        r = t % 3
        s = model.StructureId(structures_f[t % 5], r)
        kind = t % 4
        if kind == 0:
            f = rg.random_filtered_fibration(rng, fld, r, trivial=True, summands=1)
        elif kind == 1:
            f = rg.random_filtered_fibration(rng, fld, r, trivial=False, summands=1)
        elif kind == 2:
            f = rg.random_filtered_weq(rng, fld, r, summands=1)
        else:
            A = rg.random_filtered(rng, fld, summands=1, max_r=2, span=1)
            B = rg.random_filtered(rng, fld, summands=1, max_r=2, span=1)
            f = rg.random_filtered_morphism(rng, A, B)
        rep = model.check_generator_characterizations(f, s)
        if not rep.passed:
            _fail(6, desc, morphism=f, structure=(s.name, s.r), trial=t)
    structures_b = ("Apr", "Apr", "Apr", "Bpr")
    for t in range(200):
        fld = _field(t + 3)
        r = t % 3
        s = model.StructureId(structures_b[t % 4], r)
        kind = t % 4
        if kind == 0:
            g = rg.random_bicomplex_fibration(rng, fld, r, trivial=True, summands=1)
        elif kind == 1:
            g = rg.random_bicomplex_fibration(rng, fld, r, trivial=False, summands=1)
        elif kind == 2:
            g = rg.random_bicomplex_weq(rng, fld, r, summands=1)
        else:
            A = rg.random_bicomplex(rng, fld, summands=1, max_r=2, span=1)
            B = rg.random_bicomplex(rng, fld, summands=1, max_r=2, span=1)
            g = rg.random_bicomplex_morphism(rng, A, B)
        rep = model.check_generator_characterizations(g, s)
        if not rep.passed:
            _fail(6, desc, morphism=g, structure=(s.name, s.r), trial=t)
    _announce(6, desc, True)


def test_criterion_7_homotopy_invariance():
    desc = "100 constructed r-homotopic pairs give identical induced matrices on page r+1"
    rng = rg.make_rng("acceptance-7")
    pairs = 0
    t = 0
    while pairs < 40:
        fld = _field(t)
        r = t % 3
        A = rg.random_bicomplex(rng, fld, summands=1 + t % 2, max_r=2, span=1)
        B = rg.random_bicomplex(rng, fld, summands=1 + t % 2, max_r=2, span=1)
        f = rg.random_bicomplex_morphism(rng, A, B)
        comps = rg.random_bicomplex_homotopy(rng, A, B, r)
        g = bx.morphism_sum(f, rg.bicomplex_homotopy_displacement(A, B, r, comps))
        H = cyl.assemble_homotopy(A, B, r, f, g, comps)
        if not cyl.check_r_homotopy(A, r, H, f, g):
            _fail(7, desc, f=f, r=r, trial=t)
        mf, mg = bx.induced_page_map(f, r + 1), bx.induced_page_map(g, r + 1)
        keys = set(mf.source.dims) | set(mf.target.dims)
        if not all(mf.block(*k) == mg.block(*k) for k in keys):
            _fail(7, desc, f=f, g=g, r=r, trial=t)
        pairs += 1
        t += 1
    while pairs < 80:
        fld = _field(t)
        r = t % 3
        A = rg.random_filtered(rng, fld, summands=1 + t % 2, max_r=2, span=1)
        B = rg.random_filtered(rng, fld, summands=1 + t % 2, max_r=2, span=1)
        f = rg.random_filtered_morphism(rng, A, B)
        h = rg.random_filtered_homotopy(rng, A, B, r)
        g = flt.morphism_sum(f, rg.homotopy_displacement(h))
        if not flt.check_r_homotopy(h, f, g):
            _fail(7, desc, f=f, r=r, trial=t)
        if not flt.page_equality_under_homotopy(h, f, g):
            _fail(7, desc, f=f, g=g, r=r, trial=t)
        pairs += 1
        t += 1
    # cone contractions certify id ~ 0, hence E_{r+1}(C_r(A)) = 0, r <= 3
    while pairs < 100:
        fld = _field(t)
        r = t % 4
        A = rg.random_bicomplex(rng, fld, summands=1, max_r=2, span=1)
        H, cn = cyl.contraction(A, r)
        C = cn.object
        if not cyl.check_r_homotopy(C, r, H, bx.zero_morphism(C, C), bx.identity_morphism(C)):
            _fail(7, desc, object=A, r=r, trial=t)
        cyl.unpack_homotopy(C, r, H)
        if bx.page_direct(C, r + 1).page.dims != {}:
            _fail(7, desc, object=A, r=r, trial=t)
        pairs += 1
        t += 1
    _announce(7, desc, True)


def test_criterion_8_psi_surjectivity():
    desc = "ZW_s(psi_r) surjective for 0 <= s <= r <= 3 on 100 random targets"
    rng = rg.make_rng("acceptance-8")
    for t in range(100):
        fld = _field(t)
        A = rg.random_bicomplex(rng, fld, summands=1, max_r=2, span=1)
        for r in range(0, 4):
            psi, _cn = cyl.psi_r(A, r)
            for s in range(r + 1):
                if not bx.zw_map_surjective(psi, s):
                    _fail(8, desc, object=A, r=r, s=s, trial=t)
    _announce(8, desc, True)


def test_criterion_9_wr_equals_er():
    desc = "W_r = E_r on bounded instances: both inclusions on 200 morphisms per r <= 3"
    rng = rg.make_rng("acceptance-9")
    for t in range(200):
        fld = _field(t)
        kind = t % 3
        if kind == 0:
            f = rg.random_filtered_weq(rng, fld, t % 4, summands=1)
        elif kind == 1:
            f = rg.random_filtered_fibration(rng, fld, t % 4, trivial=t % 2 == 0, summands=1)
        else:
            A = rg.random_filtered(rng, fld, summands=1 + t % 2, max_r=2, span=1)
            B = rg.random_filtered(rng, fld, summands=1 + t % 2, max_r=2, span=1)
            f = rg.random_filtered_morphism(rng, A, B)
        for r in range(0, 4):
            er, zr = flt.is_er_quiso(f, r), flt.is_zr_quiso(f, r)
            if er != zr:
                _fail(9, desc, morphism=f, r=r, trial=t)
    _announce(9, desc, True)


def test_criterion_10_golden_corpus_round_trip_and_routes(capsys):
    desc = "golden corpus: byte-identical re-emission and pages route agreement"
    from specseq.cli import main as cli_main

    corpus_path = HERE / "golden" / "corpus.json"
    with open(corpus_path, "r", encoding="utf-8") as fh:
        corpus = json.load(fh)
    assert len(corpus) >= 600
    import sys
    sys.path.insert(0, str(HERE.parent / "scripts"))
    import gen_golden

    rebuilt = gen_golden.build_corpus()
    if sorted(rebuilt) != sorted(corpus):
        _fail(10, desc, part="corpus-names")
    for name, stored in corpus.items():
        text = docio.emit_document(stored)
        kind, _fld, obj = docio.parse_document(text)
        if kind == "morphism":
            again = docio.emit_document(docio.morphism_document(obj))
        else:
            again = docio.emit_document(docio.object_document(obj))
        if again != text or docio.emit_document(rebuilt[name]) != text:
            _fail(10, desc, part=f"round-trip {name}")
    # route agreement of `pages` across the bicomplex part of the corpus
    import tempfile

    checked = 0
    for name, stored in sorted(corpus.items()):
        if stored["kind"] != "bicomplex":
            continue
        with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
            fh.write(docio.emit_document(stored))
            path = fh.name
        outs = []
        for route in ("direct", "witness", "tot"):
            code = cli_main(["pages", path, "--all-upto", "4", "--route", route])
            captured = capsys.readouterr()
            assert code == 0
            outs.append(captured.out)
        os.unlink(path)
        if not (outs[0] == outs[1] == outs[2]):
            _fail(10, desc, part=f"route-agreement {name}")
        checked += 1
    assert checked >= 100
    _announce(10, desc, True)
