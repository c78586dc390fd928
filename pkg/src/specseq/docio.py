"""JSON interchange documents: load/save objects, morphisms, homotopies and
lifting problems with full invariant validation on load.

A document is {"format_version", "field", "kind", "payload"}. Matrices are
dense row-major lists of entry strings ("a/b" rationals, residues for F_p);
zero blocks are omitted, which keeps emission canonical. parse(emit(x))
reproduces x exactly, and emission is byte-deterministic.

Bidegree orientation, fixed once: the first index is the column/filtration
index p (d_1 decreases it), the second is the vertical index (d_0 raises it).
"""

from __future__ import annotations

import json

from .bigraded import InvariantError, RBigradedComplex
from .fields import Field, FieldError, field_from_spec
from .linalg import ExactMatrix
from . import bicomplex as bx
from . import cylinders as cyl
from . import filtered as flt
from . import model

FORMAT_VERSION = 1

KINDS = ("filtered", "bicomplex", "r-bigraded", "morphism", "homotopy", "lifting-problem")


class DocumentError(ValueError):
    """Malformed document (schema or syntax); distinct from invariant failures."""


class EndpointMismatch(ValueError):
    """Morphism endpoints do not fit together."""


# -- matrix and key helpers -------------------------------------------------------------


def _fmt_matrix(field: Field, m: ExactMatrix) -> list:
    return [[field.fmt(x) for x in row] for row in m.data]


def _parse_matrix(field: Field, rows, nrows: int, ncols: int, where: str) -> ExactMatrix:
    if not isinstance(rows, list) or len(rows) != nrows:
        raise DocumentError(f"matrix at {where} must have {nrows} rows")
    data = []
    for row in rows:
        if not isinstance(row, list) or len(row) != ncols:
            raise DocumentError(f"matrix at {where} must have {ncols} columns")
        try:
            data.append([field.parse(str(x)) for x in row])
        except FieldError as exc:
            raise DocumentError(f"bad scalar at {where}: {exc}") from exc
    return ExactMatrix(field, data, cols=ncols)


def _spot_key(i: int, j: int) -> str:
    return f"{i},{j}"


def _parse_spot(key: str) -> tuple:
    try:
        a, b = key.split(",")
        return int(a), int(b)
    except ValueError as exc:
        raise DocumentError(f"bad bidegree key {key!r}") from exc


# -- payload emitters ---------------------------------------------------------------------


def filtered_payload(A: flt.FilteredComplex) -> dict:
    field = A.field
    degrees = {}
    for n in A.degrees():
        d = A.dim(n)
        entry: dict = {"dim": d}
        if d:
            entry["basis"] = _fmt_matrix(field, A.basis_at(n))
            entry["jumps"] = list(A.jumps[n])
        degrees[str(n)] = entry
    diffs = {str(n): _fmt_matrix(field, m) for n, m in sorted(A.diff.items())}
    return {
        "degree_window": [A.n_min, A.n_max],
        "filtration_window": [A.p_min, A.p_max],
        "degrees": degrees,
        "differentials": diffs,
    }


def bicomplex_payload(A: bx.Bicomplex) -> dict:
    field = A.field
    return {
        "spots": {_spot_key(*k): d for k, d in sorted(A.dims.items())},
        "d0": {_spot_key(*k): _fmt_matrix(field, m) for k, m in sorted(A.d0.items())},
        "d1": {_spot_key(*k): _fmt_matrix(field, m) for k, m in sorted(A.d1.items())},
    }


def rbigraded_payload(A: RBigradedComplex) -> dict:
    field = A.field
    return {
        "r": A.r,
        "spots": {_spot_key(*k): d for k, d in sorted(A.dims.items())},
        "delta": {_spot_key(*k): _fmt_matrix(field, m) for k, m in sorted(A.delta.items())},
    }


def object_document(obj) -> dict:
    if isinstance(obj, flt.FilteredComplex):
        kind, payload = "filtered", filtered_payload(obj)
    elif isinstance(obj, bx.Bicomplex):
        kind, payload = "bicomplex", bicomplex_payload(obj)
    elif isinstance(obj, RBigradedComplex):
        kind, payload = "r-bigraded", rbigraded_payload(obj)
    else:
        raise DocumentError(f"cannot serialize object of type {type(obj).__name__}")
    return {
        "format_version": FORMAT_VERSION,
        "field": obj.field.spec,
        "kind": kind,
        "payload": payload,
    }


def _morphism_payload(f) -> dict:
    if isinstance(f, flt.FilteredMorphism):
        field = f.source.field
        return {
            "category": "filtered",
            "source": filtered_payload(f.source),
            "target": filtered_payload(f.target),
            "blocks": {str(n): _fmt_matrix(field, m) for n, m in sorted(f.blocks.items())},
        }
    if isinstance(f, bx.BicomplexMorphism):
        field = f.source.field
        return {
            "category": "bicomplex",
            "source": bicomplex_payload(f.source),
            "target": bicomplex_payload(f.target),
            "blocks": {_spot_key(*k): _fmt_matrix(field, m) for k, m in sorted(f.blocks.items())},
        }
    raise DocumentError(f"cannot serialize morphism of type {type(f).__name__}")


def morphism_document(f) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "field": f.source.field.spec,
        "kind": "morphism",
        "payload": _morphism_payload(f),
    }


def filtered_homotopy_document(h: flt.FilteredHomotopy, f: flt.FilteredMorphism,
                               g: flt.FilteredMorphism) -> dict:
    field = h.source.field
    payload = {
        "category": "filtered",
        "r": h.r,
        "source": filtered_payload(h.source),
        "target": filtered_payload(h.target),
        "f": {str(n): _fmt_matrix(field, m) for n, m in sorted(f.blocks.items())},
        "g": {str(n): _fmt_matrix(field, m) for n, m in sorted(g.blocks.items())},
        "h": {str(n): _fmt_matrix(field, m) for n, m in sorted(h.maps.items())},
    }
    return {"format_version": FORMAT_VERSION, "field": field.spec, "kind": "homotopy", "payload": payload}


def bicomplex_homotopy_document(r: int, h: bx.BicomplexMorphism, f: bx.BicomplexMorphism,
                                g: bx.BicomplexMorphism) -> dict:
    field = f.source.field
    payload = {
        "category": "bicomplex",
        "r": r,
        "source": bicomplex_payload(f.source),
        "target": bicomplex_payload(f.target),
        "f": {_spot_key(*k): _fmt_matrix(field, m) for k, m in sorted(f.blocks.items())},
        "g": {_spot_key(*k): _fmt_matrix(field, m) for k, m in sorted(g.blocks.items())},
        "h": {_spot_key(*k): _fmt_matrix(field, m) for k, m in sorted(h.blocks.items())},
    }
    return {"format_version": FORMAT_VERSION, "field": field.spec, "kind": "homotopy", "payload": payload}


def lifting_problem_document(prob: model.LiftingProblem) -> dict:
    field = prob.left.source.field
    fmt = _fmt_matrix
    if prob.category == "filtered":
        def blocks_of(f):
            return {str(n): fmt(field, m) for n, m in sorted(f.blocks.items())}
    else:
        def blocks_of(f):
            return {_spot_key(*k): fmt(field, m) for k, m in sorted(f.blocks.items())}
    payload = {
        "category": prob.category,
        "left": _morphism_payload(prob.left),
        "right": _morphism_payload(prob.right),
        "top": blocks_of(prob.top),
        "bottom": blocks_of(prob.bottom),
    }
    return {"format_version": FORMAT_VERSION, "field": field.spec, "kind": "lifting-problem", "payload": payload}


def emit_document(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# -- parsing -------------------------------------------------------------------------------


def _require(cond: bool, msg: str):
    if not cond:
        raise DocumentError(msg)


def parse_filtered(field: Field, payload: dict) -> flt.FilteredComplex:
    _require(isinstance(payload, dict), "filtered payload must be an object")
    try:
        n_min, n_max = payload["degree_window"]
        p_min, p_max = payload["filtration_window"]
        degrees = payload["degrees"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"filtered payload missing windows or degrees: {exc}") from exc
    dims, basis, jumps = {}, {}, {}
    width = p_max - p_min + 1
    for key, entry in degrees.items():
        try:
            n = int(key)
        except ValueError as exc:
            raise DocumentError(f"bad degree key {key!r}") from exc
        _require(isinstance(entry, dict) and "dim" in entry, f"degree {n} needs a dim")
        d = entry["dim"]
        _require(isinstance(d, int) and d >= 0, f"degree {n} has a bad dim")
        dims[n] = d
        if d:
            _require("jumps" in entry, f"degree {n} needs a jump vector")
            jv = entry["jumps"]
            _require(isinstance(jv, list) and len(jv) == width, f"degree {n} jump vector must have length {width}")
            jumps[n] = tuple(int(x) for x in jv)
            if "basis" in entry:
                basis[n] = _parse_matrix(field, entry["basis"], d, d, f"basis at degree {n}")
    diffs = {}
    for key, rows in payload.get("differentials", {}).items():
        try:
            n = int(key)
        except ValueError as exc:
            raise DocumentError(f"bad differential key {key!r}") from exc
        diffs[n] = _parse_matrix(field, rows, dims.get(n + 1, 0), dims.get(n, 0), f"differential at degree {n}")
    return flt.FilteredComplex(field, (n_min, n_max), (p_min, p_max), dims, basis, jumps, diffs)


def parse_bicomplex(field: Field, payload: dict) -> bx.Bicomplex:
    _require(isinstance(payload, dict), "bicomplex payload must be an object")
    spots = payload.get("spots", {})
    dims = {}
    for key, d in spots.items():
        _require(isinstance(d, int) and d >= 0, f"bad dimension at spot {key}")
        dims[_parse_spot(key)] = d
    d0, d1 = {}, {}
    for name, store, shape in (
        ("d0", d0, lambda i, j: (dims.get((i, j + 1), 0), dims.get((i, j), 0))),
        ("d1", d1, lambda i, j: (dims.get((i - 1, j), 0), dims.get((i, j), 0))),
    ):
        for key, rows in payload.get(name, {}).items():
            i, j = _parse_spot(key)
            nr, nc = shape(i, j)
            store[(i, j)] = _parse_matrix(field, rows, nr, nc, f"{name} at {key}")
    return bx.Bicomplex(field, dims, d0, d1)


def parse_rbigraded(field: Field, payload: dict) -> RBigradedComplex:
    _require(isinstance(payload, dict), "r-bigraded payload must be an object")
    _require("r" in payload and isinstance(payload["r"], int), "r-bigraded payload needs an integer r")
    r = payload["r"]
    dims = {}
    for key, d in payload.get("spots", {}).items():
        dims[_parse_spot(key)] = d
    delta = {}
    for key, rows in payload.get("delta", {}).items():
        i, j = _parse_spot(key)
        nr = dims.get((i - r, j + 1 - r), 0)
        delta[(i, j)] = _parse_matrix(field, rows, nr, dims.get((i, j), 0), f"delta at {key}")
    return RBigradedComplex(field, r, dims, delta)


def _parse_blocks_filtered(field, blocks, src, tgt, where):
    out = {}
    for key, rows in blocks.items():
        try:
            n = int(key)
        except ValueError as exc:
            raise DocumentError(f"bad block key {key!r} in {where}") from exc
        out[n] = _parse_matrix(field, rows, tgt.dim(n), src.dim(n), f"{where} block at degree {n}")
    return out


def _parse_blocks_bicomplex(field, blocks, src, tgt, where):
    out = {}
    for key, rows in blocks.items():
        k = _parse_spot(key)
        out[k] = _parse_matrix(field, rows, tgt.dim(*k), src.dim(*k), f"{where} block at {key}")
    return out


def parse_morphism(field: Field, payload: dict):
    _require(isinstance(payload, dict), "morphism payload must be an object")
    cat = payload.get("category")
    _require(cat in ("filtered", "bicomplex"), "morphism category must be filtered or bicomplex")
    if cat == "filtered":
        src = parse_filtered(field, payload.get("source", {}))
        tgt = parse_filtered(field, payload.get("target", {}))
        blocks = _parse_blocks_filtered(field, payload.get("blocks", {}), src, tgt, "morphism")
        return flt.FilteredMorphism(src, tgt, blocks)
    src = parse_bicomplex(field, payload.get("source", {}))
    tgt = parse_bicomplex(field, payload.get("target", {}))
    blocks = _parse_blocks_bicomplex(field, payload.get("blocks", {}), src, tgt, "morphism")
    return bx.BicomplexMorphism(src, tgt, blocks)


def parse_homotopy(field: Field, payload: dict):
    """Returns (r, h, f, g); h is validated as a homotopy from f to g."""
    cat = payload.get("category")
    _require(cat in ("filtered", "bicomplex"), "homotopy category must be filtered or bicomplex")
    _require(isinstance(payload.get("r"), int) and payload["r"] >= 0, "homotopy needs a stage r >= 0")
    r = payload["r"]
    if cat == "filtered":
        src = parse_filtered(field, payload.get("source", {}))
        tgt = parse_filtered(field, payload.get("target", {}))
        f = flt.FilteredMorphism(src, tgt, _parse_blocks_filtered(field, payload.get("f", {}), src, tgt, "f"))
        g = flt.FilteredMorphism(src, tgt, _parse_blocks_filtered(field, payload.get("g", {}), src, tgt, "g"))
        maps = {}
        for key, rows in payload.get("h", {}).items():
            n = int(key)
            maps[n] = _parse_matrix(field, rows, tgt.dim(n - 1), src.dim(n), f"h at degree {n}")
        h = flt.FilteredHomotopy(r, src, tgt, maps)
        if not flt.check_r_homotopy(h, f, g):
            raise InvariantError("homotopy identity dh + hd = g - f or the filtration shift fails")
        return r, h, f, g
    src = parse_bicomplex(field, payload.get("source", {}))
    tgt = parse_bicomplex(field, payload.get("target", {}))
    f = bx.BicomplexMorphism(src, tgt, _parse_blocks_bicomplex(field, payload.get("f", {}), src, tgt, "f"))
    g = bx.BicomplexMorphism(src, tgt, _parse_blocks_bicomplex(field, payload.get("g", {}), src, tgt, "g"))
    cylA = cyl.cylinder(src, r)
    blocks = _parse_blocks_bicomplex(field, payload.get("h", {}), cylA.object, tgt, "h")
    h = bx.BicomplexMorphism(cylA.object, tgt, blocks)
    if not cyl.check_r_homotopy(src, r, h, f, g):
        raise InvariantError("homotopy does not restrict to f and g on the cylinder ends")
    return r, h, f, g


def _square_blocks(field, cat, blocks, src, tgt, where):
    """Parse the blocks of a square's side; shape failures are endpoint errors."""
    try:
        if cat == "filtered":
            return _parse_blocks_filtered(field, blocks, src, tgt, where)
        return _parse_blocks_bicomplex(field, blocks, src, tgt, where)
    except DocumentError as exc:
        raise EndpointMismatch(f"{where} of the square does not fit its endpoints: {exc}") from exc


def parse_lifting_problem(field: Field, payload: dict) -> model.LiftingProblem:
    cat = payload.get("category")
    _require(cat in ("filtered", "bicomplex"), "lifting-problem category must be filtered or bicomplex")
    left_payload = payload.get("left", {})
    right_payload = payload.get("right", {})
    if left_payload.get("category") != cat or right_payload.get("category") != cat:
        raise EndpointMismatch("left and right maps must live in the problem's category")
    left = parse_morphism(field, left_payload)
    right = parse_morphism(field, right_payload)
    if cat == "filtered":
        top = flt.FilteredMorphism(
            left.source, right.source,
            _square_blocks(field, cat, payload.get("top", {}), left.source, right.source, "top"),
        )
        bottom = flt.FilteredMorphism(
            left.target, right.target,
            _square_blocks(field, cat, payload.get("bottom", {}), left.target, right.target, "bottom"),
        )
    else:
        top = bx.BicomplexMorphism(
            left.source, right.source,
            _square_blocks(field, cat, payload.get("top", {}), left.source, right.source, "top"),
        )
        bottom = bx.BicomplexMorphism(
            left.target, right.target,
            _square_blocks(field, cat, payload.get("bottom", {}), left.target, right.target, "bottom"),
        )
    prob = model.LiftingProblem(cat, left, right, top, bottom)
    prob.validate()
    return prob


def parse_document(text):
    """Parse a document from JSON text or an already-decoded dict.

    Returns (kind, field, value). Schema problems raise DocumentError;
    violated structural invariants raise InvariantError.
    """
    if isinstance(text, (str, bytes)):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"not valid JSON: {exc}") from exc
    else:
        doc = text
    _require(isinstance(doc, dict), "document must be a JSON object")
    _require(doc.get("format_version") == FORMAT_VERSION, "unsupported format_version")
    kind = doc.get("kind")
    _require(kind in KINDS, f"unknown document kind {kind!r}")
    try:
        field = field_from_spec(doc.get("field", ""))
    except FieldError as exc:
        raise DocumentError(str(exc)) from exc
    payload = doc.get("payload")
    _require(isinstance(payload, dict), "document payload must be an object")
    if kind == "filtered":
        return kind, field, parse_filtered(field, payload)
    if kind == "bicomplex":
        return kind, field, parse_bicomplex(field, payload)
    if kind == "r-bigraded":
        return kind, field, parse_rbigraded(field, payload)
    if kind == "morphism":
        return kind, field, parse_morphism(field, payload)
    if kind == "homotopy":
        return kind, field, parse_homotopy(field, payload)
    return kind, field, parse_lifting_problem(field, payload)
