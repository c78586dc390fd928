#!/usr/bin/env python3
"""Regenerate the bundled golden corpus of generator documents.

The corpus holds every generator document for r <= 4 and |i|,|j| <= 2
(|p|,|n| <= 2 on the filtered side), serialized canonically over Q. Tests
re-derive each entry and compare byte-for-byte.
"""

import json
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from specseq import bicomplex as bx, cylinders as cyl, docio, filtered as flt
from specseq.fields import QQ

SPAN = range(-2, 3)
RMAX = 4


def build_corpus() -> dict:
    docs = {}
    for i in SPAN:
        for j in SPAN:
            docs[f"D0_i{i}_j{j}"] = docio.object_document(bx.gen_D0(QQ, i, j))
            for r in range(1, RMAX + 1):
                docs[f"ZW_r{r}_i{i}_j{j}"] = docio.object_document(bx.gen_ZW(QQ, r, i, j))
                docs[f"BW_r{r}_i{i}_j{j}"] = docio.object_document(bx.gen_BW(QQ, r, i, j))
                docs[f"iota_r{r}_i{i}_j{j}"] = docio.morphism_document(bx.gen_iota(QQ, r, i, j))
    for p in SPAN:
        for n in SPAN:
            for r in range(0, RMAX + 1):
                docs[f"Z_r{r}_p{p}_n{n}"] = docio.object_document(flt.gen_Z(QQ, p, n, r))
            for r in range(1, RMAX + 1):
                docs[f"B_r{r}_p{p}_n{n}"] = docio.object_document(flt.gen_B(QQ, p, n, r))
                docs[f"phi_r{r}_p{p}_n{n}"] = docio.morphism_document(flt.gen_phi(QQ, p, n, r))
    for r in range(0, RMAX + 1):
        docs[f"Cyl_r{r}"] = docio.object_document(cyl.gen_Cyl(QQ, r))
    return docs


def main():
    out = os.path.join(os.path.dirname(__file__), "..", "tests", "golden", "corpus.json")
    os.makedirs(os.path.dirname(out), exist_ok=True)
    corpus = {name: json.loads(docio.emit_document(doc)) for name, doc in sorted(build_corpus().items())}
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(corpus, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"wrote {len(corpus)} documents to {out}")


if __name__ == "__main__":
    main()
