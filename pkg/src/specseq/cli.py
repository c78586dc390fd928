"""Deterministic command-line surface.

Commands: pages, gen, map, check, shift, decalage, tot. Documents are read
and written in the canonical JSON interchange format; identical invocations
produce byte-identical stdout. Exit codes: 0 success (and, for check, all
reports passing), 2 parse error, 3 invariant violation, 4 invalid
parameters, 5 endpoint mismatch, 6 structure/category mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .bigraded import InvariantError
from .fields import FieldError, field_from_spec
from . import bicomplex as bx
from . import cylinders as cyl
from . import docio
from . import filtered as flt
from . import model
from . import suite as suite_mod

EXIT_PARSE = 2
EXIT_INVARIANT = 3
EXIT_PARAMS = 4
EXIT_ENDPOINT = 5
EXIT_STRUCTURE = 6


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_document(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_PARSE, f"cannot read {path}: {exc}") from exc
    try:
        return docio.parse_document(text)
    except docio.EndpointMismatch as exc:
        raise CliError(EXIT_ENDPOINT, str(exc)) from exc
    except docio.DocumentError as exc:
        raise CliError(EXIT_PARSE, str(exc)) from exc
    except InvariantError as exc:
        raise CliError(EXIT_INVARIANT, str(exc)) from exc


def _write_output(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _page_table(obj, r: int, route: str) -> str:
    if isinstance(obj, bx.Bicomplex):
        if route == "witness":
            pg = bx.page_via_witness(obj, r).page
        elif route == "tot":
            pg = flt.page(bx.tot(obj), r).page
        else:
            pg = bx.page_direct(obj, r).page
    else:
        pg = flt.page(obj, r).page
    lines = [f"# r={r}", "p\tq\tdim\tdelta_rank"]
    for (p, q) in sorted(pg.dims):
        rank = pg.delta_at(p, q).rank()
        lines.append(f"{p}\t{q}\t{pg.dim(p, q)}\t{rank}")
    return "\n".join(lines) + "\n"


def cmd_pages(args) -> int:
    kind, _field, obj = _read_document(args.file)
    if kind not in ("filtered", "bicomplex"):
        raise CliError(EXIT_PARAMS, f"pages needs a filtered or bicomplex document, got {kind}")
    # a filtered complex has a single computation route; --route is a no-op there
    stages = range(0, args.all_upto + 1) if args.all_upto is not None else [args.r]
    out = "".join(_page_table(obj, r, args.route) for r in stages)
    _write_output(out, args.out)
    return 0


GEN_NAMES = ("D0", "ZW", "BW", "Z", "B", "Cyl", "cone-of", "cyl-of", "mr", "iota", "phi")


def cmd_gen(args) -> int:
    try:
        field = field_from_spec(args.field)
    except FieldError as exc:
        raise CliError(EXIT_PARAMS, str(exc)) from exc

    def need(*names):
        for name in names:
            if getattr(args, name.replace("-", "_")) is None:
                raise CliError(EXIT_PARAMS, f"gen {args.name} needs --{name}")

    name = args.name
    try:
        if name == "D0":
            need("i", "j")
            doc = docio.object_document(bx.gen_D0(field, args.i, args.j))
        elif name == "ZW":
            need("r", "i", "j")
            doc = docio.object_document(bx.gen_ZW(field, args.r, args.i, args.j))
        elif name == "BW":
            need("r", "i", "j")
            doc = docio.object_document(bx.gen_BW(field, args.r, args.i, args.j))
        elif name == "Z":
            need("r", "p", "n")
            doc = docio.object_document(flt.gen_Z(field, args.p, args.n, args.r))
        elif name == "B":
            need("r", "p", "n")
            doc = docio.object_document(flt.gen_B(field, args.p, args.n, args.r))
        elif name == "Cyl":
            need("r")
            doc = docio.object_document(cyl.gen_Cyl(field, args.r))
        elif name == "iota":
            need("r", "i", "j")
            doc = docio.morphism_document(bx.gen_iota(field, args.r, args.i, args.j))
        elif name == "phi":
            need("r", "p", "n")
            doc = docio.morphism_document(flt.gen_phi(field, args.p, args.n, args.r))
        elif name in ("cone-of", "cyl-of", "mr"):
            need("r", "input")
            kind, _f, obj = _read_document(args.input)
            if name == "mr":
                if kind != "filtered":
                    raise CliError(EXIT_PARAMS, "gen mr needs a filtered input document")
                M, _pi = flt.m_r(obj, args.r)
                doc = docio.object_document(M)
            else:
                if kind != "bicomplex":
                    raise CliError(EXIT_PARAMS, f"gen {name} needs a bicomplex input document")
                built = cyl.cone(obj, args.r) if name == "cone-of" else cyl.cylinder(obj, args.r)
                doc = docio.object_document(built.object)
        else:
            raise CliError(EXIT_PARAMS, f"unknown generator {name!r}; choose from {GEN_NAMES}")
    except InvariantError as exc:
        raise CliError(EXIT_PARAMS, str(exc)) from exc
    _write_output(docio.emit_document(doc), args.out)
    return 0


STRUCTURE_FLAGS = {"Ar": "Ar", "Br": "Br", "Cr": "Cr", "Apr": "Apr", "Bpr": "Bpr"}


def cmd_map(args) -> int:
    kind, _field, value = _read_document(args.file)
    if args.cmd in ("is-weq", "is-fib"):
        if kind != "morphism":
            raise CliError(EXIT_PARAMS, f"map --cmd {args.cmd} needs a morphism document")
        if args.structure is None or args.r is None:
            raise CliError(EXIT_PARAMS, "map --cmd is-weq/is-fib needs --structure and --r")
        s = model.StructureId(STRUCTURE_FLAGS[args.structure], args.r)
        try:
            verdict = model.classify_weq(value, s) if args.cmd == "is-weq" else model.classify_fib(value, s)
        except model.CategoryMismatch as exc:
            raise CliError(EXIT_STRUCTURE, str(exc)) from exc
        _write_output("true\n" if verdict else "false\n", args.out)
        return 0
    if args.cmd == "pages":
        if kind != "morphism":
            raise CliError(EXIT_PARAMS, "map --cmd pages needs a morphism document")
        if args.r is None:
            raise CliError(EXIT_PARAMS, "map --cmd pages needs --r")
        if isinstance(value, flt.FilteredMorphism):
            m = flt.induced_page_map(value, args.r)
        else:
            m = bx.induced_page_map(value, args.r)
        lines = [f"# r={args.r}", "p\tq\tdim_source\tdim_target\trank"]
        for (p, q) in sorted(set(m.source.dims) | set(m.target.dims)):
            blk = m.block(p, q)
            lines.append(f"{p}\t{q}\t{m.source.dim(p, q)}\t{m.target.dim(p, q)}\t{blk.rank()}")
        _write_output("\n".join(lines) + "\n", args.out)
        return 0
    if args.cmd == "lift":
        if kind != "lifting-problem":
            raise CliError(EXIT_PARAMS, "map --cmd lift needs a lifting-problem document")
        h = model.solve_lift(value)
        if h is None:
            _write_output("no lift\n", args.out)
        else:
            _write_output("lift exists\n" + docio.emit_document(docio.morphism_document(h)), args.out)
        return 0
    raise CliError(EXIT_PARAMS, f"unknown map command {args.cmd!r}")


def cmd_check(args) -> int:
    seed = os.environ.get("SPECSEQ_SEED", None)
    if seed is None:
        seed = args.seed
    params = suite_mod.SuiteParams(trials=args.count)
    try:
        reports = suite_mod.run_property_suite(seed, args.suite, params)
    except ValueError as exc:
        raise CliError(EXIT_PARAMS, str(exc)) from exc
    lines = []
    failures = []
    for rep in reports:
        lines.append(rep.line())
        if not rep.passed:
            failures.append(rep)
    lines.append(f"total {len(reports)} checks, {len(failures)} failures")
    out = "\n".join(lines) + "\n"
    for rep in failures:
        out += json.dumps({"name": rep.name, "instance": rep.instance, "counterexample": rep.counterexample}) + "\n"
    _write_output(out, args.out)
    return 0 if not failures else 1


def cmd_transform(args, which: str) -> int:
    kind, _field, obj = _read_document(args.file)
    if which == "tot":
        if kind != "bicomplex":
            raise CliError(EXIT_PARAMS, "tot needs a bicomplex document")
        result = flt.canonicalize(bx.tot(obj))
    else:
        if kind != "filtered":
            raise CliError(EXIT_PARAMS, f"{which} needs a filtered document")
        fn = flt.shift if which == "shift" else flt.decalage
        result = flt.canonicalize(fn(obj, args.r))
    _write_output(docio.emit_document(docio.object_document(result)), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="specseq", description="Exact spectral-sequence engine")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pages", help="page dimension table with delta ranks")
    p.add_argument("file")
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--all-upto", type=int, default=None)
    p.add_argument("--route", choices=("direct", "witness", "tot"), default="direct")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_pages)

    p = sub.add_parser("gen", help="emit a canonical generator document")
    p.add_argument("name")
    p.add_argument("--field", default="Q")
    p.add_argument("--r", type=int)
    p.add_argument("--i", type=int)
    p.add_argument("--j", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--input")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("map", help="classify a morphism or solve a lifting problem")
    p.add_argument("file")
    p.add_argument("--cmd", required=True, choices=("is-weq", "is-fib", "pages", "lift"))
    p.add_argument("--structure", choices=tuple(STRUCTURE_FLAGS))
    p.add_argument("--r", type=int)
    p.add_argument("--out")
    p.set_defaults(fn=cmd_map)

    p = sub.add_parser("check", help="run a property suite")
    p.add_argument("--suite", default="full")
    p.add_argument("--seed", default="0")
    p.add_argument("--count", type=int, default=2, help="trials per check")
    p.add_argument("--out")
    p.set_defaults(fn=cmd_check)

    for name in ("shift", "decalage", "tot"):
        p = sub.add_parser(name, help=f"apply {name} and emit the canonical result")
        p.add_argument("file")
        if name != "tot":
            p.add_argument("--r", type=int, required=True)
        p.add_argument("--out")
        p.set_defaults(fn=lambda args, _n=name: cmd_transform(args, _n))

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except docio.EndpointMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENDPOINT
    except model.CategoryMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_STRUCTURE
    except InvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
