"""r-bigraded complexes: differentials of bidegree (-r, 1-r), cohomology,
translation, cones and quasi-isomorphism testing.

These are the common codomain of every page computation: a spectral sequence
stage E_r is an r-bigraded complex, and E_{r+1} is its cohomology.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import Field
from .linalg import ExactMatrix, Subspace, image, kernel, quotient


class InvariantError(ValueError):
    """A structural invariant failed on construction or load."""


Bidegree = tuple[int, int]


@dataclass(frozen=True)
class BigradedModule:
    """Finite-support bigraded dimensions; zero outside the stored keys."""

    dims: dict

    def dim(self, p: int, q: int) -> int:
        return self.dims.get((p, q), 0)

    def window(self) -> tuple[int, int, int, int] | None:
        if not self.dims:
            return None
        ps = [p for p, _ in self.dims]
        qs = [q for _, q in self.dims]
        return min(ps), max(ps), min(qs), max(qs)

    def total_dim(self) -> int:
        return sum(self.dims.values())


class RBigradedComplex:
    """Bigraded module with a square-zero differential A^{p,q} -> A^{p-r,q+1-r}."""

    def __init__(self, field: Field, r: int, dims: dict, delta: dict, check: bool = True):
        if r < 0:
            raise InvariantError("stage r must be >= 0")
        self.field = field
        self.r = r
        self.dims = {k: d for k, d in dims.items() if d}
        self.delta = {}
        for key, blk in delta.items():
            if blk is None or blk.is_zero():
                continue
            self.delta[key] = blk
        if check:
            self._validate()

    def target(self, p: int, q: int) -> Bidegree:
        return (p - self.r, q + 1 - self.r)

    def source(self, p: int, q: int) -> Bidegree:
        return (p + self.r, q - 1 + self.r)

    def dim(self, p: int, q: int) -> int:
        return self.dims.get((p, q), 0)

    def delta_at(self, p: int, q: int) -> ExactMatrix:
        blk = self.delta.get((p, q))
        if blk is None:
            tp, tq = self.target(p, q)
            return ExactMatrix.zeros(self.field, self.dim(tp, tq), self.dim(p, q))
        return blk

    def bidegrees(self) -> list[Bidegree]:
        return sorted(self.dims)

    def module(self) -> BigradedModule:
        return BigradedModule(dict(self.dims))

    def _validate(self):
        for (p, q), blk in self.delta.items():
            if self.dim(p, q) != blk.cols:
                raise InvariantError(f"delta at {(p, q)} has {blk.cols} columns, dim is {self.dim(p, q)}")
            tp, tq = self.target(p, q)
            if self.dim(tp, tq) != blk.rows:
                raise InvariantError(f"delta at {(p, q)} has {blk.rows} rows, target dim is {self.dim(tp, tq)}")
        for (p, q) in self.dims:
            tp, tq = self.target(p, q)
            if self.dim(tp, tq) and self.dim(*self.target(tp, tq)):
                if not (self.delta_at(tp, tq) @ self.delta_at(p, q)).is_zero():
                    raise InvariantError(f"delta^2 != 0 at {(p, q)}")

    def __eq__(self, other):
        return (
            isinstance(other, RBigradedComplex)
            and self.field == other.field
            and self.r == other.r
            and self.dims == other.dims
            and {k: v for k, v in self.delta.items()} == {k: v for k, v in other.delta.items()}
        )


class BigradedMorphism:
    """Bidegree-(0,0) map commuting with the differentials."""

    def __init__(self, source: RBigradedComplex, target: RBigradedComplex, blocks: dict, check: bool = True):
        if source.r != target.r:
            raise InvariantError("morphism endpoints have different stages r")
        if source.field != target.field:
            raise InvariantError("morphism endpoints over different fields")
        self.source = source
        self.target = target
        self.blocks = {}
        for key, blk in blocks.items():
            if blk is None or blk.is_zero():
                continue
            self.blocks[key] = blk
        if check:
            self._validate()

    def block(self, p: int, q: int) -> ExactMatrix:
        blk = self.blocks.get((p, q))
        if blk is None:
            return ExactMatrix.zeros(self.source.field, self.target.dim(p, q), self.source.dim(p, q))
        return blk

    def _validate(self):
        for (p, q), blk in self.blocks.items():
            if blk.cols != self.source.dim(p, q) or blk.rows != self.target.dim(p, q):
                raise InvariantError(f"morphism block shape mismatch at {(p, q)}")
        keys = set(self.source.dims) | set(self.blocks)
        for (p, q) in keys:
            tp, tq = self.source.target(p, q)
            lhs = self.target.delta_at(p, q) @ self.block(p, q)
            rhs = self.block(tp, tq) @ self.source.delta_at(p, q)
            if lhs != rhs:
                raise InvariantError(f"morphism does not commute with delta at {(p, q)}")

    def is_bidegreewise_iso(self) -> bool:
        for (p, q) in set(self.source.dims) | set(self.target.dims):
            blk = self.block(p, q)
            if blk.rows != blk.cols or blk.rank() != blk.rows:
                return False
        return True


@dataclass(frozen=True)
class CohomologyData:
    """Cohomology dims with deterministic subquotient data per bidegree."""

    module: BigradedModule
    quotients: dict  # bidegree -> QuotientData

    def dim(self, p: int, q: int) -> int:
        return self.module.dim(p, q)


def cohomology(A: RBigradedComplex) -> CohomologyData:
    """Per-bidegree ker(delta)/im(delta) with canonical project/lift."""
    dims = {}
    quots = {}
    for (p, q) in A.dims:
        U = kernel(A.delta_at(p, q))
        sp, sq = A.source(p, q)
        if A.dim(sp, sq):
            W = image(A.delta_at(sp, sq))
        else:
            W = Subspace.zero(A.field, A.dim(p, q))
        qd = quotient(U, W)
        if qd.dim:
            dims[(p, q)] = qd.dim
        quots[(p, q)] = qd
    return CohomologyData(BigradedModule(dims), quots)


def is_acyclic(A: RBigradedComplex) -> bool:
    return not cohomology(A).module.dims


def translation(A: RBigradedComplex) -> RBigradedComplex:
    """T^{p,q}(A) = A^{p-r,q-r+1}; the differential is reindexed, not changed."""
    r = A.r
    dims = {(p + r, q + r - 1): d for (p, q), d in A.dims.items()}
    delta = {(p + r, q + r - 1): blk for (p, q), blk in A.delta.items()}
    return RBigradedComplex(A.field, r, dims, delta, check=False)


def cone(f: BigradedMorphism) -> RBigradedComplex:
    """C(f)^{p,q} = A^{p-r,q-r+1} + B^{p,q} with D(a,b) = (da, f(a) - db)."""
    A, B = f.source, f.target
    r = A.r
    field = A.field
    dims = {}
    keys = set()
    for (p, q) in A.dims:
        keys.add((p + r, q + r - 1))
    keys.update(B.dims)
    for (p, q) in keys:
        d = A.dim(p - r, q - r + 1) + B.dim(p, q)
        if d:
            dims[(p, q)] = d
    delta = {}
    for (p, q) in dims:
        ap, aq = p - r, q - r + 1
        tp, tq = p - r, q + 1 - r
        sdims = [A.dim(ap, aq), B.dim(p, q)]
        tdims = [A.dim(ap - r, aq - r + 1), B.dim(tp, tq)]
        if sum(sdims) == 0 or sum(tdims) == 0:
            continue
        blk = ExactMatrix.block(
            field,
            [
                [A.delta_at(ap, aq), None],
                [f.block(ap, aq), -B.delta_at(p, q)],
            ],
            tdims,
            sdims,
        )
        delta[(p, q)] = blk
    return RBigradedComplex(field, r, dims, delta)


def induced_cohomology_map(f: BigradedMorphism) -> dict:
    """Blocks of H(f) in the canonical cohomology bases."""
    HA = cohomology(f.source)
    HB = cohomology(f.target)
    out = {}
    for (p, q) in set(HA.quotients) | set(HB.quotients):
        da = HA.quotients.get((p, q))
        db = HB.quotients.get((p, q))
        sdim = da.dim if da else 0
        tdim = db.dim if db else 0
        if sdim == 0 or tdim == 0:
            out[(p, q)] = ExactMatrix.zeros(f.source.field, tdim, sdim)
            continue
        out[(p, q)] = db.project @ f.block(p, q) @ da.lift
    return out


def is_quasi_iso(f: BigradedMorphism) -> bool:
    """True when H(f) is a bidegree-wise isomorphism."""
    HA = cohomology(f.source)
    HB = cohomology(f.target)
    blocks = induced_cohomology_map(f)
    for (p, q) in set(HA.module.dims) | set(HB.module.dims):
        if HA.dim(p, q) != HB.dim(p, q):
            return False
        blk = blocks.get((p, q))
        if blk is not None and blk.rows and blk.rank() != blk.rows:
            return False
    return True


def identity_morphism(A: RBigradedComplex) -> BigradedMorphism:
    blocks = {k: ExactMatrix.identity(A.field, d) for k, d in A.dims.items()}
    return BigradedMorphism(A, A, blocks, check=False)


def zero_morphism(A: RBigradedComplex, B: RBigradedComplex) -> BigradedMorphism:
    return BigradedMorphism(A, B, {}, check=False)


def compose(g: BigradedMorphism, f: BigradedMorphism) -> BigradedMorphism:
    """g after f."""
    if g.source is not f.target and g.source.dims != f.target.dims:
        raise InvariantError("composition endpoint mismatch")
    blocks = {}
    for (p, q) in f.blocks:
        blocks[(p, q)] = g.block(p, q) @ f.block(p, q)
    return BigradedMorphism(f.source, g.target, blocks, check=False)
