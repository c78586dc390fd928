"""Interchange format: validation completeness and distinct error messages."""

import json

import pytest

from specseq.bigraded import InvariantError
from specseq import bicomplex as bx, docio, filtered as flt, randgen as rg
from specseq.fields import GF, QQ


def _filtered_doc():
    return {
        "format_version": 1,
        "field": "Q",
        "kind": "filtered",
        "payload": {
            "degree_window": [0, 1],
            "filtration_window": [0, 1],
            "degrees": {
                "0": {"dim": 1, "basis": [["1"]], "jumps": [1, 1]},
                "1": {"dim": 1, "basis": [["1"]], "jumps": [1, 1]},
            },
            "differentials": {"0": [["1"]]},
        },
    }


def test_valid_document_parses():
    kind, fld, obj = docio.parse_document(json.dumps(_filtered_doc()))
    assert kind == "filtered" and obj.dim(0) == 1


@pytest.mark.parametrize(
    "mutate, exc, fragment",
    [
        (lambda d: d.update(format_version=7), docio.DocumentError, "format_version"),
        (lambda d: d.update(field="Fp:6"), docio.DocumentError, "not prime"),
        (lambda d: d.update(kind="mystery"), docio.DocumentError, "kind"),
        (lambda d: d["payload"]["degrees"]["0"].update(jumps=[2, 1]), InvariantError, "non-decreasing"),
        (lambda d: d["payload"]["degrees"]["0"].update(jumps=[0, 0]), InvariantError, "exhaustive"),
        (lambda d: d["payload"]["degrees"]["0"].update(basis=[["0"]]), InvariantError, "singular"),
        (lambda d: d["payload"]["degrees"]["1"].update(jumps=[0, 1]), InvariantError, "respect the filtration"),
        (lambda d: d["payload"]["differentials"].update({"0": [["1/0"]]}), docio.DocumentError, "scalar"),
        (lambda d: d["payload"]["degrees"]["0"].update(jumps=[1]), docio.DocumentError, "length"),
    ],
)
def test_filtered_invariants_have_distinct_messages(mutate, exc, fragment):
    doc = _filtered_doc()
    mutate(doc)
    with pytest.raises(exc) as err:
        docio.parse_document(json.dumps(doc))
    assert fragment in str(err.value)


def test_bicomplex_invariants_named():
    base = {
        "format_version": 1,
        "field": "Q",
        "kind": "bicomplex",
        "payload": {
            "spots": {"0,0": 1, "0,1": 1, "0,2": 1},
            "d0": {"0,0": [["1"]], "0,1": [["1"]]},
            "d1": {},
        },
    }
    with pytest.raises(InvariantError) as err:
        docio.parse_document(json.dumps(base))
    assert "d0d0 != 0" in str(err.value)


def test_morphism_commutation_checked_on_load():
    A = flt.gen_Z(QQ, 0, 0, 1)
    doc = docio.morphism_document(flt.identity_morphism(A))
    doc["payload"]["blocks"]["0"] = [["2"]]
    with pytest.raises(InvariantError) as err:
        docio.parse_document(json.dumps(doc))
    assert "commute" in str(err.value)


def test_morphism_filtration_checked_on_load():
    A = flt.gen_Z(QQ, 0, 0, 1)
    B = flt.gen_Z(QQ, 1, 0, 1)
    one = flt.identity_morphism(A).blocks
    # identity blocks B -> A lower every weight: compatible
    docio.parse_document(json.dumps(docio.morphism_document(flt.FilteredMorphism(B, A, dict(one)))))
    # identity blocks A -> B raise weight 0 into weight 1: rejected
    doc = docio.morphism_document(flt.FilteredMorphism(B, A, dict(one)))
    doc["payload"]["source"], doc["payload"]["target"] = doc["payload"]["target"], doc["payload"]["source"]
    with pytest.raises(InvariantError) as err:
        docio.parse_document(json.dumps(doc))
    assert "filtration-compatible" in str(err.value)


def test_homotopy_document_round_trip():
    rng = rg.make_rng("docio-h")
    A = rg.random_filtered(rng, GF(5), summands=2, max_r=1, span=1)
    B = rg.random_filtered(rng, GF(5), summands=2, max_r=1, span=1)
    f = rg.random_filtered_morphism(rng, A, B)
    h = rg.random_filtered_homotopy(rng, A, B, 1)
    g = flt.morphism_sum(f, rg.homotopy_displacement(h))
    doc = docio.filtered_homotopy_document(h, f, g)
    text = docio.emit_document(doc)
    kind, _fld, (r, h2, f2, g2) = docio.parse_document(text)
    assert kind == "homotopy" and r == 1
    assert flt.check_r_homotopy(h2, f2, g2)
    assert docio.emit_document(docio.filtered_homotopy_document(h2, f2, g2)) == text


def test_bicomplex_homotopy_document_round_trip():
    from specseq import cylinders as cyl

    rng = rg.make_rng("docio-bh")
    A = rg.random_bicomplex(rng, GF(2), summands=2, max_r=1, span=1)
    H, cn = cyl.contraction(A, 1)
    C = cn.object
    doc = docio.bicomplex_homotopy_document(1, H, bx.zero_morphism(C, C), bx.identity_morphism(C))
    text = docio.emit_document(doc)
    kind, _fld, (r, h2, f2, g2) = docio.parse_document(text)
    assert kind == "homotopy" and r == 1
    assert docio.emit_document(docio.bicomplex_homotopy_document(r, h2, f2, g2)) == text


def test_rbigraded_round_trip():
    from specseq import filtered as flt2

    A = rg.random_filtered(rg.make_rng("docio-rb"), GF(5), summands=2, max_r=1, span=1)
    pg = flt2.page(A, 1).page
    text = docio.emit_document(docio.object_document(pg))
    kind, _fld, parsed = docio.parse_document(text)
    assert kind == "r-bigraded" and parsed.r == 1
    assert parsed.dims == pg.dims
    assert docio.emit_document(docio.object_document(parsed)) == text


def test_lifting_problem_round_trip():
    from specseq import model

    Y = flt.gen_Z(QQ, 0, 0, 1)
    zero = flt.zero_complex(QQ)
    prob = model.LiftingProblem(
        "filtered",
        flt.FilteredMorphism(zero, Y, {}, check=False),
        flt.identity_morphism(Y),
        flt.zero_morphism(zero, Y),
        flt.FilteredMorphism(Y, Y, dict(flt.identity_morphism(Y).blocks)),
    )
    text = docio.emit_document(docio.lifting_problem_document(prob))
    kind, _fld, prob2 = docio.parse_document(text)
    assert kind == "lifting-problem"
    assert docio.emit_document(docio.lifting_problem_document(prob2)) == text
