"""CLI surface: generators, page tables, classification, lifting, exit codes."""

from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from specseq import bicomplex as bx, docio, filtered as flt, model, randgen as rg
from specseq.cli import main
from specseq.fields import GF, QQ


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    env.pop("SPECSEQ_SEED", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "specseq.cli", *args],
        capture_output=True,
        text=True,
        env=env,
    )


def run_inproc(capsys, *args) -> tuple[int, str]:
    code = main(list(args))
    captured = capsys.readouterr()
    return code, captured.out


def test_gen_zw1_two_spot_staircase(tmp_path):
    r = run_cli("gen", "ZW", "--r", "1", "--i", "0", "--j", "0")
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["payload"]["spots"] == {"-1,0": 1, "0,0": 1}
    assert doc["payload"]["d1"] == {"0,0": [["1"]]}


def test_gen_cyl2_has_minus_one_one_column():
    r = run_cli("gen", "Cyl", "--r", "2")
    doc = json.loads(r.stdout)
    assert doc["payload"]["d1"]["1,0"] == [["-1"], ["1"]]


def test_gen_d0_four_spots_of_identities():
    r = run_cli("gen", "D0", "--i", "0", "--j", "0")
    doc = json.loads(r.stdout)
    assert len(doc["payload"]["spots"]) == 4
    assert all(v == 1 for v in doc["payload"]["spots"].values())
    assert len(doc["payload"]["d0"]) == 2 and len(doc["payload"]["d1"]) == 2


def test_pages_of_zero_object_is_empty_table(tmp_path, capsys):
    zero = docio.emit_document(docio.object_document(flt.zero_complex(QQ)))
    path = tmp_path / "zero.json"
    path.write_text(zero)
    code, out = run_inproc(capsys, "pages", str(path), "--r", "1")
    assert code == 0
    assert out == "# r=1\np\tq\tdim\tdelta_rank\n"


def test_pages_zw2_at_r3_empty(tmp_path, capsys):
    code, _ = run_inproc(capsys, "gen", "ZW", "--r", "2", "--i", "0", "--j", "0", "--out", str(tmp_path / "zw.json"))
    assert code == 0
    code, out = run_inproc(capsys, "pages", str(tmp_path / "zw.json"), "--r", "3")
    assert code == 0
    assert out == "# r=3\np\tq\tdim\tdelta_rank\n"


def test_pages_route_agreement(tmp_path, capsys):
    rng = rg.make_rng("cli-routes")
    A = rg.random_bicomplex(rng, GF(5), summands=2, max_r=2, span=1)
    path = tmp_path / "a.json"
    path.write_text(docio.emit_document(docio.object_document(A)))
    outs = []
    for route in ("direct", "witness", "tot"):
        code, out = run_inproc(capsys, "pages", str(path), "--all-upto", "3", "--route", route)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1] == outs[2]


def test_cli_determinism_byte_identical():
    a = run_cli("gen", "BW", "--r", "3", "--i", "1", "--j", "-1")
    b = run_cli("gen", "BW", "--r", "3", "--i", "1", "--j", "-1")
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_shift_then_decalage_round_trip(tmp_path, capsys):
    rng = rg.make_rng("cli-decs")
    A = rg.random_filtered(rng, GF(2), summands=3, max_r=2, span=1)
    src = tmp_path / "a.json"
    src.write_text(docio.emit_document(docio.object_document(A)))
    code, shifted = run_inproc(capsys, "shift", str(src), "--r", "2")
    assert code == 0
    mid = tmp_path / "s.json"
    mid.write_text(shifted)
    code, back = run_inproc(capsys, "decalage", str(mid), "--r", "2")
    assert code == 0
    canon = docio.emit_document(docio.object_document(flt.canonicalize(A)))
    assert back == canon


def test_map_is_weq_identity(tmp_path, capsys):
    A = rg.random_filtered(rg.make_rng("cli-id"), QQ, summands=2, max_r=1, span=1)
    doc = docio.emit_document(docio.morphism_document(flt.identity_morphism(A)))
    path = tmp_path / "id.json"
    path.write_text(doc)
    code, out = run_inproc(capsys, "map", str(path), "--cmd", "is-weq", "--structure", "Ar", "--r", "2")
    assert code == 0 and out == "true\n"
    code, out = run_inproc(capsys, "map", str(path), "--cmd", "is-fib", "--structure", "Br", "--r", "1")
    assert code == 0 and out == "true\n"


def test_map_lift_found_and_not_found(tmp_path, capsys):
    rng = rg.make_rng("cli-lift")
    f = rg.random_filtered_fibration(rng, GF(5), 1, trivial=True, summands=1)
    Y = f.target
    pick = None
    for n in Y.degrees():
        for p in range(Y.p_min, Y.p_max + 1):
            if flt.z_subspace(Y, 1, p, n).dim:
                pick = (p, n)
                break
        if pick:
            break
    p0, n0 = pick
    z = flt.z_subspace(Y, 1, p0, n0)
    zero = flt.zero_complex(GF(5))
    G = flt.gen_Z(GF(5), p0, n0, 1)
    prob = model.LiftingProblem(
        "filtered",
        flt.FilteredMorphism(zero, G, {}, check=False),
        f,
        flt.zero_morphism(zero, f.source),
        flt.z_element_morphism(Y, p0, n0, 1, z.basis.col(0)),
    )
    path = tmp_path / "lift.json"
    path.write_text(docio.emit_document(docio.lifting_problem_document(prob)))
    code, out = run_inproc(capsys, "map", str(path), "--cmd", "lift")
    assert code == 0 and out.startswith("lift exists\n")

    # no lift: right map is 0 -> Z_1
    prob2 = model.LiftingProblem(
        "filtered",
        flt.FilteredMorphism(zero, flt.gen_Z(GF(5), 0, 0, 1), {}, check=False),
        flt.zero_morphism(zero, flt.gen_Z(GF(5), 0, 0, 1)),
        flt.zero_morphism(zero, zero),
        flt.z_element_morphism(flt.gen_Z(GF(5), 0, 0, 1), 0, 0, 1,
                               flt.z_subspace(flt.gen_Z(GF(5), 0, 0, 1), 1, 0, 0).basis.col(0)),
    )
    path2 = tmp_path / "nolift.json"
    path2.write_text(docio.emit_document(docio.lifting_problem_document(prob2)))
    code, out = run_inproc(capsys, "map", str(path2), "--cmd", "lift")
    assert code == 0 and out == "no lift\n"


def test_check_quick_suite_exits_zero():
    r = run_cli("check", "--suite", "quick", "--seed", "0", "--count", "1")
    assert r.returncode == 0, r.stdout + r.stderr
    assert "0 failures" in r.stdout


def test_check_full_suite_seed_zero_exits_zero():
    r = run_cli("check", "--suite", "full", "--seed", "0", "--count", "1")
    assert r.returncode == 0, r.stdout + r.stderr
    assert "0 failures" in r.stdout


def test_seed_env_override():
    a = run_cli("check", "--suite", "quick", "--seed", "7", "--count", "1")
    b = run_cli("check", "--suite", "quick", "--seed", "0", "--count", "1", env_extra={"SPECSEQ_SEED": "7"})
    assert a.stdout == b.stdout


def test_exit_code_parse_error(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    r = run_cli("pages", str(bad), "--r", "0")
    assert r.returncode == 2


def test_exit_code_invariant_violation(tmp_path):
    doc = {
        "format_version": 1, "field": "Q", "kind": "bicomplex",
        "payload": {
            "spots": {"0,0": 1, "0,1": 1, "-1,0": 1, "-1,1": 1},
            "d0": {"0,0": [["1"]], "-1,0": [["1"]]},
            "d1": {"0,0": [["1"]], "0,1": [["2"]]},
        },
    }
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    r = run_cli("pages", str(path), "--r", "0")
    assert r.returncode == 3
    assert "d0d1 != d1d0" in r.stderr


def test_exit_code_invalid_params():
    r = run_cli("gen", "BW", "--r", "0", "--i", "0", "--j", "0")
    assert r.returncode == 4


def test_exit_code_endpoint_mismatch(tmp_path):
    Y = flt.gen_Z(QQ, 0, 0, 1)
    zero = flt.zero_complex(QQ)
    prob = model.LiftingProblem(
        "filtered",
        flt.FilteredMorphism(zero, Y, {}, check=False),
        flt.identity_morphism(Y),
        flt.zero_morphism(zero, Y),
        flt.identity_morphism(Y),
    )
    doc = docio.lifting_problem_document(prob)
    # corrupt the bottom blocks so they no longer fit the endpoints
    doc["payload"]["bottom"]["0"] = [["1", "0"]]
    path = tmp_path / "mismatch.json"
    path.write_text(json.dumps(doc))
    r = run_cli("map", str(path), "--cmd", "lift")
    assert r.returncode == 5


def test_exit_code_structure_category_mismatch(tmp_path):
    B = rg.random_bicomplex(rg.make_rng("cli-cat"), QQ, summands=1, max_r=1, span=1)
    doc = docio.emit_document(docio.morphism_document(bx.identity_morphism(B)))
    path = tmp_path / "bicx_id.json"
    path.write_text(doc)
    r = run_cli("map", str(path), "--cmd", "is-weq", "--structure", "Ar", "--r", "1")
    assert r.returncode == 6


def test_tot_command(tmp_path, capsys):
    code, _ = run_inproc(capsys, "gen", "D0", "--i", "0", "--j", "0", "--out", str(tmp_path / "d0.json"))
    assert code == 0
    code, out = run_inproc(capsys, "tot", str(tmp_path / "d0.json"))
    assert code == 0
    kind, _f, T = docio.parse_document(out)
    assert kind == "filtered"
    assert flt.page(T, 1).page.dims == {}


def test_gen_documents_round_trip(tmp_path):
    for args in (("Z", "--r", "2", "--p", "0", "--n", "0"),
                 ("B", "--r", "2", "--p", "0", "--n", "0"),
                 ("iota", "--r", "2", "--i", "0", "--j", "0"),
                 ("phi", "--r", "2", "--p", "0", "--n", "0")):
        r = run_cli("gen", *args, "--field", "Fp:101")
        assert r.returncode == 0
        kind, _f, obj = docio.parse_document(r.stdout)
        if kind == "morphism":
            again = docio.emit_document(docio.morphism_document(obj))
        else:
            again = docio.emit_document(docio.object_document(obj))
        assert again == r.stdout
