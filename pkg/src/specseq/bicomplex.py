"""Bicomplexes with commuting differentials d_0 (0,1) and d_1 (-1,0).

The column spectral sequence is computed along three independent routes:
directly from the cycle/boundary descriptions inside each spot, through the
witness cycle and boundary spaces, and through the total filtered complex.
The Koszul sign enters only in Tot and in the tensor product; the
differentials themselves commute, they do not anticommute.

Witness spaces are realized as constraint-kernel subspaces of direct sums of
spots: the witnesses a_1, ..., a_{r-1} are genuine coordinates, which makes
z_r, b_r, w_r literal matrices and the page differential computable by a
canonical solve. Witness boundary spaces are indexed by their own bidegree,
so w_r and b_r are maps of bidegree (0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass

from .bigraded import BigradedMorphism, InvariantError, RBigradedComplex
from .fields import Field
from .linalg import ExactMatrix, Subspace, image, kernel, quotient, solve, solve_matrix
from . import filtered as flt


class Bicomplex:
    """Finite-support bigraded module with commuting square-zero differentials."""

    def __init__(self, field: Field, dims: dict, d0: dict, d1: dict, check=True):
        self.field = field
        self.dims = {k: d for k, d in dims.items() if d}
        self.d0 = {k: m for k, m in d0.items() if m is not None and not m.is_zero()}
        self.d1 = {k: m for k, m in d1.items() if m is not None and not m.is_zero()}
        self._cache: dict = {}
        if check:
            self._validate()

    def dim(self, i: int, j: int) -> int:
        return self.dims.get((i, j), 0)

    def spots(self):
        return sorted(self.dims)

    def window(self):
        if not self.dims:
            return (0, 0, 0, 0)
        ii = [i for i, _ in self.dims]
        jj = [j for _, j in self.dims]
        return (min(ii), max(ii), min(jj), max(jj))

    def d0_at(self, i: int, j: int) -> ExactMatrix:
        m = self.d0.get((i, j))
        if m is None:
            return ExactMatrix.zeros(self.field, self.dim(i, j + 1), self.dim(i, j))
        return m

    def d1_at(self, i: int, j: int) -> ExactMatrix:
        m = self.d1.get((i, j))
        if m is None:
            return ExactMatrix.zeros(self.field, self.dim(i - 1, j), self.dim(i, j))
        return m

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def _validate(self):
        for (i, j), m in self.d0.items():
            if m.cols != self.dim(i, j) or m.rows != self.dim(i, j + 1):
                raise InvariantError(f"d0 shape mismatch at {(i, j)}")
        for (i, j), m in self.d1.items():
            if m.cols != self.dim(i, j) or m.rows != self.dim(i - 1, j):
                raise InvariantError(f"d1 shape mismatch at {(i, j)}")
        for (i, j) in self.dims:
            if self.dim(i, j + 2) and not (self.d0_at(i, j + 1) @ self.d0_at(i, j)).is_zero():
                raise InvariantError(f"d0d0 != 0 at {(i, j)}")
            if self.dim(i - 2, j) and not (self.d1_at(i - 1, j) @ self.d1_at(i, j)).is_zero():
                raise InvariantError(f"d1d1 != 0 at {(i, j)}")
            lhs = self.d0_at(i - 1, j) @ self.d1_at(i, j)
            rhs = self.d1_at(i, j + 1) @ self.d0_at(i, j)
            if lhs != rhs:
                raise InvariantError(f"d0d1 != d1d0 at {(i, j)}")

    def __eq__(self, other):
        return (
            isinstance(other, Bicomplex)
            and self.field == other.field
            and self.dims == other.dims
            and self.d0 == other.d0
            and self.d1 == other.d1
        )


class BicomplexMorphism:
    """Bidegree-(0,0) map commuting with both differentials."""

    def __init__(self, source: Bicomplex, target: Bicomplex, blocks: dict, check=True):
        if source.field != target.field:
            raise InvariantError("morphism endpoints over different fields")
        self.source = source
        self.target = target
        self.blocks = {k: b for k, b in blocks.items() if b is not None and not b.is_zero()}
        if check:
            self._validate()

    def block(self, i: int, j: int) -> ExactMatrix:
        b = self.blocks.get((i, j))
        if b is None:
            return ExactMatrix.zeros(self.source.field, self.target.dim(i, j), self.source.dim(i, j))
        return b

    def _validate(self):
        A, B = self.source, self.target
        for (i, j), b in self.blocks.items():
            if b.cols != A.dim(i, j) or b.rows != B.dim(i, j):
                raise InvariantError(f"morphism block shape mismatch at {(i, j)}")
        keys = set(A.dims) | set(self.blocks)
        for (i, j) in keys:
            if (B.d0_at(i, j) @ self.block(i, j)) != (self.block(i, j + 1) @ A.d0_at(i, j)):
                raise InvariantError(f"morphism does not commute with d0 at {(i, j)}")
            if (B.d1_at(i, j) @ self.block(i, j)) != (self.block(i - 1, j) @ A.d1_at(i, j)):
                raise InvariantError(f"morphism does not commute with d1 at {(i, j)}")

    def is_surjective(self) -> bool:
        for (i, j), d in self.target.dims.items():
            if self.block(i, j).rank() < d:
                return False
        return True


def identity_morphism(A: Bicomplex) -> BicomplexMorphism:
    blocks = {k: ExactMatrix.identity(A.field, d) for k, d in A.dims.items()}
    return BicomplexMorphism(A, A, blocks, check=False)


def zero_morphism(A: Bicomplex, B: Bicomplex) -> BicomplexMorphism:
    return BicomplexMorphism(A, B, {}, check=False)


def zero_bicomplex(field: Field) -> Bicomplex:
    return Bicomplex(field, {}, {}, {}, check=False)


def compose(g: BicomplexMorphism, f: BicomplexMorphism) -> BicomplexMorphism:
    blocks = {}
    for k in f.source.dims:
        if g.target.dim(*k):
            blocks[k] = g.block(*k) @ f.block(*k)
    return BicomplexMorphism(f.source, g.target, blocks, check=False)


def morphism_sum(f: BicomplexMorphism, g: BicomplexMorphism) -> BicomplexMorphism:
    blocks = {}
    for k in set(f.blocks) | set(g.blocks):
        blocks[k] = f.block(*k) + g.block(*k)
    return BicomplexMorphism(f.source, f.target, blocks)


def direct_sum(A: Bicomplex, B: Bicomplex) -> Bicomplex:
    """Spotwise sum, A-coordinates first."""
    field = A.field
    dims, d0, d1 = {}, {}, {}
    for k in set(A.dims) | set(B.dims):
        dims[k] = A.dim(*k) + B.dim(*k)
    for (i, j) in dims:
        if A.dim(i, j + 1) + B.dim(i, j + 1):
            d0[(i, j)] = ExactMatrix.block(
                field,
                [[A.d0_at(i, j), None], [None, B.d0_at(i, j)]],
                [A.dim(i, j + 1), B.dim(i, j + 1)],
                [A.dim(i, j), B.dim(i, j)],
            )
        if A.dim(i - 1, j) + B.dim(i - 1, j):
            d1[(i, j)] = ExactMatrix.block(
                field,
                [[A.d1_at(i, j), None], [None, B.d1_at(i, j)]],
                [A.dim(i - 1, j), B.dim(i - 1, j)],
                [A.dim(i, j), B.dim(i, j)],
            )
    return Bicomplex(field, dims, d0, d1)


def summand_inclusion(A: Bicomplex, B: Bicomplex, which: str) -> BicomplexMorphism:
    S = direct_sum(A, B)
    X = A if which == "A" else B
    blocks = {}
    for k, d in X.dims.items():
        off = 0 if which == "A" else A.dim(*k)
        m = [[S.field.one() if (row == off + col) else S.field.zero() for col in range(d)] for row in range(S.dim(*k))]
        blocks[k] = ExactMatrix(S.field, m, cols=d)
    return BicomplexMorphism(X, S, blocks, check=False)


def summand_projection(A: Bicomplex, B: Bicomplex, which: str) -> BicomplexMorphism:
    S = direct_sum(A, B)
    X = A if which == "A" else B
    blocks = {}
    for k, d in X.dims.items():
        off = 0 if which == "A" else A.dim(*k)
        m = [[S.field.one() if (col == off + row) else S.field.zero() for col in range(S.dim(*k))] for row in range(d)]
        blocks[k] = ExactMatrix(S.field, m, cols=S.dim(*k))
    return BicomplexMorphism(S, X, blocks, check=False)


# -- tensor product -------------------------------------------------------------


def _kron(field: Field, M: ExactMatrix, N: ExactMatrix) -> ExactMatrix:
    rows = M.rows * N.rows
    cols = M.cols * N.cols
    out = [[field.zero()] * cols for _ in range(rows)]
    for u in range(M.rows):
        for x in range(M.cols):
            a = M.data[u][x]
            if field.is_zero(a):
                continue
            for v in range(N.rows):
                for y in range(N.cols):
                    b = N.data[v][y]
                    if not field.is_zero(b):
                        out[u * N.rows + v][x * N.cols + y] = field.mul(a, b)
    return ExactMatrix(field, out, cols=cols) if rows else ExactMatrix.zeros(field, 0, cols)


def tensor_blocks(A: Bicomplex, B: Bicomplex, p: int, q: int) -> list:
    """A-spots (s,t) contributing to (A x B)^{p,q}, in lexicographic order."""
    out = []
    for (s, t) in sorted(A.dims):
        db = B.dim(p - s, q - t)
        if db:
            out.append(((s, t), A.dim(s, t), db))
    return out


def tensor(A: Bicomplex, B: Bicomplex) -> Bicomplex:
    """Tensor product with the sign convention fixed by the cylinder formulas:
    passing a homogeneous a of bidegree (s,t), d_0 picks up (-1)^t and d_1
    picks up (-1)^s."""
    field = A.field
    dims = {}
    for (s, t), da in A.dims.items():
        for (u, v), db in B.dims.items():
            k = (s + u, t + v)
            dims[k] = dims.get(k, 0) + da * db
    d0, d1 = {}, {}
    for (p, q) in dims:
        src = tensor_blocks(A, B, p, q)
        # d0 block
        tgt = tensor_blocks(A, B, p, q + 1)
        if tgt:
            tindex = {st: n for n, (st, _, _) in enumerate(tgt)}
            grid = [[None] * len(src) for _ in tgt]
            for ci, ((s, t), da, db) in enumerate(src):
                if ((s, t + 1)) in tindex and A.dim(s, t + 1):
                    grid[tindex[(s, t + 1)]][ci] = _kron(field, A.d0_at(s, t), ExactMatrix.identity(field, db))
                if (s, t) in tindex and B.dim(p - s, q - t + 1):
                    blk = _kron(field, ExactMatrix.identity(field, da), B.d0_at(p - s, q - t))
                    if t % 2:
                        blk = -blk
                    prev = grid[tindex[(s, t)]][ci]
                    grid[tindex[(s, t)]][ci] = blk if prev is None else prev + blk
            mat = ExactMatrix.block(
                field,
                grid,
                [d_a * d_b for (_, d_a, d_b) in tgt],
                [d_a * d_b for (_, d_a, d_b) in src],
            )
            if not mat.is_zero():
                d0[(p, q)] = mat
        # d1 block
        tgt = tensor_blocks(A, B, p - 1, q)
        if tgt:
            tindex = {st: n for n, (st, _, _) in enumerate(tgt)}
            grid = [[None] * len(src) for _ in tgt]
            for ci, ((s, t), da, db) in enumerate(src):
                if (s - 1, t) in tindex and A.dim(s - 1, t):
                    grid[tindex[(s - 1, t)]][ci] = _kron(field, A.d1_at(s, t), ExactMatrix.identity(field, db))
                if (s, t) in tindex and B.dim(p - 1 - s, q - t):
                    blk = _kron(field, ExactMatrix.identity(field, da), B.d1_at(p - s, q - t))
                    if s % 2:
                        blk = -blk
                    prev = grid[tindex[(s, t)]][ci]
                    grid[tindex[(s, t)]][ci] = blk if prev is None else prev + blk
            mat = ExactMatrix.block(
                field,
                grid,
                [d_a * d_b for (_, d_a, d_b) in tgt],
                [d_a * d_b for (_, d_a, d_b) in src],
            )
            if not mat.is_zero():
                d1[(p, q)] = mat
    return Bicomplex(field, dims, d0, d1)


def tensor_unit(field: Field) -> Bicomplex:
    return Bicomplex(field, {(0, 0): 1}, {}, {}, check=False)


def tensor_morphism(f: BicomplexMorphism, g: BicomplexMorphism) -> BicomplexMorphism:
    """f (x) g on the canonical tensor bases (both of bidegree (0,0))."""
    S = tensor(f.source, g.source)
    T = tensor(f.target, g.target)
    field = S.field
    blocks = {}
    for (p, q) in S.dims:
        src = tensor_blocks(f.source, g.source, p, q)
        tgt = tensor_blocks(f.target, g.target, p, q)
        if not tgt:
            continue
        tindex = {st: n for n, (st, _, _) in enumerate(tgt)}
        grid = [[None] * len(src) for _ in tgt]
        for ci, ((s, t), _da, _db) in enumerate(src):
            if (s, t) in tindex:
                grid[tindex[(s, t)]][ci] = _kron(field, f.block(s, t), g.block(p - s, q - t))
        blocks[(p, q)] = ExactMatrix.block(
            field,
            grid,
            [d_a * d_b for (_, d_a, d_b) in tgt],
            [d_a * d_b for (_, d_a, d_b) in src],
        )
    return BicomplexMorphism(S, T, blocks)


# -- totalization ----------------------------------------------------------------


def tot(A: Bicomplex) -> flt.FilteredComplex:
    """Total filtered complex with the column filtration.

    Degree n collects the spots (i, n+i) in ascending column order, so the
    adapted basis is the identity and the weight of a vector is its column.
    The differential is d(a)_j = d0(a_j) + (-1)^n d1(a_{j+1}); the finite
    support collapses the defining product to a finite sum.
    """
    field = A.field
    if not A.dims:
        return flt.zero_complex(field)
    i_min, i_max, j_min, j_max = A.window()
    n_min = min(j - i for (i, j) in A.dims)
    n_max = max(j - i for (i, j) in A.dims)
    cols_by_degree = {}
    weights = {}
    for n in range(n_min, n_max + 1):
        cols = [i for i in range(i_min, i_max + 1) if A.dim(i, n + i)]
        cols_by_degree[n] = cols
        weights[n] = [i for i in cols for _ in range(A.dim(i, n + i))]
    diffs = {}
    for n in range(n_min, n_max + 1):
        src = cols_by_degree.get(n, [])
        tgt = cols_by_degree.get(n + 1, [])
        if not src or not tgt:
            continue
        tindex = {i: k for k, i in enumerate(tgt)}
        grid = [[None] * len(src) for _ in tgt]
        for ci, i in enumerate(src):
            if i in tindex and A.dim(i, n + i + 1):
                grid[tindex[i]][ci] = A.d0_at(i, n + i)
            if (i - 1) in tindex and A.dim(i - 1, n + i):
                blk = A.d1_at(i, n + i)
                if n % 2:
                    blk = -blk
                grid[tindex[i - 1]][ci] = blk
        mat = ExactMatrix.block(
            field,
            grid,
            [A.dim(i, n + 1 + i) for i in tgt],
            [A.dim(i, n + i) for i in src],
        )
        if not mat.is_zero():
            diffs[n] = mat
    return flt.from_weights(field, weights, diffs)


def tot_morphism(f: BicomplexMorphism) -> flt.FilteredMorphism:
    TA, TB = tot(f.source), tot(f.target)
    field = f.source.field
    blocks = {}
    for n in range(min(TA.n_min, TB.n_min), max(TA.n_max, TB.n_max) + 1):
        if TA.dim(n) == 0 or TB.dim(n) == 0:
            continue
        scols = [i for i in sorted(set(i for (i, j) in f.source.dims if j - i == n))]
        tcols = [i for i in sorted(set(i for (i, j) in f.target.dims if j - i == n))]
        tindex = {i: k for k, i in enumerate(tcols)}
        grid = [[None] * len(scols) for _ in tcols]
        for ci, i in enumerate(scols):
            if i in tindex:
                grid[tindex[i]][ci] = f.block(i, n + i)
        blocks[n] = ExactMatrix.block(
            field,
            grid,
            [f.target.dim(i, n + i) for i in tcols],
            [f.source.dim(i, n + i) for i in scols],
        )
    return flt.FilteredMorphism(TA, TB, blocks)


# -- witness cycles and boundaries --------------------------------------------------


@dataclass(frozen=True)
class WitnessSpace:
    """Tuples (a_0, ..., a_{r-1}) with d0 a_0 = 0 and d1 a_{i-1} = d0 a_i,
    realized inside the direct sum of the slots."""

    r: int
    bidegree: tuple
    slots: tuple  # spot of each coordinate block
    slot_dims: tuple
    space: Subspace

    @property
    def ambient_dim(self) -> int:
        return sum(self.slot_dims)

    def slot_offset(self, k: int) -> int:
        return sum(self.slot_dims[:k])


def witness_cycles(A: Bicomplex, r: int, p: int, q: int) -> WitnessSpace:
    key = ("zw", r, p, q)
    if key in A._cache:
        return A._cache[key]
    field = A.field
    if r == 0:
        d = A.dim(p, q)
        out = WitnessSpace(0, (p, q), ((p, q),), (d,), Subspace.full(field, d))
        A._cache[key] = out
        return out
    slots = tuple((p - i, q - i) for i in range(r))
    sdims = tuple(A.dim(*s) for s in slots)
    total = sum(sdims)
    if total == 0:
        out = WitnessSpace(r, (p, q), slots, sdims, Subspace.zero(field, 0))
        A._cache[key] = out
        return out
    rows = []
    row_dims = []
    # d0 a_0 = 0
    grid0 = [A.d0_at(p, q) if k == 0 else None for k in range(r)]
    rows.append(grid0)
    row_dims.append(A.dim(p, q + 1))
    # d1 a_{i-1} - d0 a_i = 0
    for i in range(1, r):
        row = [None] * r
        row[i - 1] = A.d1_at(p - i + 1, q - i + 1)
        row[i] = -A.d0_at(p - i, q - i)
        rows.append(row)
        row_dims.append(A.dim(p - i, q - i + 1))
    C = ExactMatrix.block(field, rows, row_dims, list(sdims))
    out = WitnessSpace(r, (p, q), slots, sdims, kernel(C))
    A._cache[key] = out
    return out


def witness_boundaries(A: Bicomplex, r: int, p: int, q: int) -> WitnessSpace:
    """BW_r at its own bidegree (p, q); w_r and b_r map it into bidegree (p, q+1)."""
    key = ("bw", r, p, q)
    if key in A._cache:
        return A._cache[key]
    field = A.field
    if r == 0:
        out = WitnessSpace(0, (p, q), (), (), Subspace.zero(field, 0))
    elif r == 1:
        d = A.dim(p, q)
        out = WitnessSpace(1, (p, q), ((p, q),), (d,), Subspace.full(field, d))
    else:
        zb = witness_cycles(A, r - 1, p + r - 1, q + r - 1)
        zc = witness_cycles(A, r - 1, p - 1, q)
        slots = zb.slots + ((p, q),) + zc.slots
        sdims = zb.slot_dims + (A.dim(p, q),) + zc.slot_dims
        nb, na, nc = zb.space.dim, A.dim(p, q), zc.space.dim
        basis = ExactMatrix.block(
            field,
            [
                [zb.space.basis, None, None],
                [None, ExactMatrix.identity(field, na), None],
                [None, None, zc.space.basis],
            ],
            [zb.ambient_dim, na, zc.ambient_dim],
            [nb, na, nc],
        )
        out = WitnessSpace(r, (p, q), slots, sdims, Subspace.from_columns(field, sum(sdims), basis))
    A._cache[key] = out
    return out


def w_matrix(A: Bicomplex, r: int, p: int, q: int) -> ExactMatrix:
    """w_r on ambient coordinates: BW_r^{p,q} -> ZW_r^{p,q+1}."""
    field = A.field
    bw = witness_boundaries(A, r, p, q)
    zw = witness_cycles(A, r, p, q + 1)
    if r == 0:
        return ExactMatrix.zeros(field, zw.ambient_dim, bw.ambient_dim)
    if r == 1:
        return A.d0_at(p, q)
    grid = [[None] * len(bw.slots) for _ in zw.slots]
    a_idx = r - 1  # the free A^{p,q} slot sits after the b-chain
    # slot 0 of the target: d0 a + d1 b_{r-2}
    grid[0][a_idx] = A.d0_at(p, q)
    grid[0][r - 2] = A.d1_at(p + 1, q + 1)
    # slot 1: d1 a + c_0
    if r >= 2:
        grid[1][a_idx] = A.d1_at(p, q)
        grid[1][a_idx + 1] = ExactMatrix.identity(field, A.dim(p - 1, q))
    # slots i >= 2: c_{i-1}
    for i in range(2, r):
        grid[i][a_idx + i] = ExactMatrix.identity(field, A.dim(p - i, q - i + 1))
    return ExactMatrix.block(field, grid, list(zw.slot_dims), list(bw.slot_dims))


def b_matrix(A: Bicomplex, r: int, p: int, q: int) -> ExactMatrix:
    """b_r on ambient coordinates: BW_r^{p,q} -> A^{p,q+1} (b_r = z_{r} . w_r)."""
    field = A.field
    bw = witness_boundaries(A, r, p, q)
    if r == 0:
        return ExactMatrix.zeros(field, A.dim(p, q + 1), bw.ambient_dim)
    if r == 1:
        return A.d0_at(p, q)
    grid = [[None] * len(bw.slots)]
    grid[0][r - 1] = A.d0_at(p, q)
    grid[0][r - 2] = A.d1_at(p + 1, q + 1)
    return ExactMatrix.block(field, grid, [A.dim(p, q + 1)], list(bw.slot_dims))


def z_matrix(A: Bicomplex, r: int, p: int, q: int) -> ExactMatrix:
    """z_r on ambient coordinates: ZW_r^{p,q} -> A^{p,q} (first slot)."""
    zw = witness_cycles(A, r, p, q)
    field = A.field
    d = A.dim(p, q)
    grid = [[ExactMatrix.identity(field, d) if k == 0 else None for k in range(len(zw.slots))]]
    return ExactMatrix.block(field, grid, [d], list(zw.slot_dims))


def witness_delta_matrix(A: Bicomplex, r: int, p: int, q: int) -> ExactMatrix:
    """d_r(a_0,...,a_{r-1}) = (d1 a_{r-1}, 0, ..., 0) on ambient coordinates."""
    field = A.field
    src = witness_cycles(A, r, p, q)
    tgt = witness_cycles(A, r, p - r, q + 1 - r)
    if r == 0:
        return A.d0_at(p, q)
    grid = [[None] * len(src.slots) for _ in tgt.slots]
    grid[0][r - 1] = A.d1_at(p - r + 1, q - r + 1)
    return ExactMatrix.block(field, grid, list(tgt.slot_dims), list(src.slot_dims))


def z_direct_subspace(A: Bicomplex, r: int, p: int, q: int) -> Subspace:
    """Z_r^{p,q}(A) inside the spot A^{p,q}."""
    key = ("zd", r, p, q)
    if key in A._cache:
        return A._cache[key]
    zw = witness_cycles(A, r, p, q)
    out = image(z_matrix(A, r, p, q) @ zw.space.basis)
    A._cache[key] = out
    return out


def b_direct_subspace(A: Bicomplex, r: int, p: int, q: int) -> Subspace:
    """B_r^{p,q}(A) inside the spot A^{p,q}."""
    key = ("bd", r, p, q)
    if key in A._cache:
        return A._cache[key]
    if r == 0:
        out = Subspace.zero(A.field, A.dim(p, q))
    else:
        bw = witness_boundaries(A, r, p, q - 1)
        out = image(b_matrix(A, r, p, q - 1) @ bw.space.basis)
    A._cache[key] = out
    return out


@dataclass
class BicomplexPage:
    """A page with lifts back to representative data.

    route "direct": lifts land in the spot A^{p,q} (actual r-cycles).
    route "witness": lifts land in the witness ambient at (p,q).
    """

    r: int
    complex: Bicomplex
    page: RBigradedComplex
    quot: dict
    route: str


def _page_bidegrees(A: Bicomplex, r: int):
    """Bidegrees where stage r can be nonzero, padded for boundary effects."""
    if not A.dims:
        return []
    i_min, i_max, j_min, j_max = A.window()
    out = []
    for p in range(i_min, i_max + 1):
        for j in range(j_min, j_max + 1):
            out.append((p, j))
    return out


def page_direct(A: Bicomplex, r: int) -> BicomplexPage:
    """E_r from the in-spot cycle and boundary subspaces; the differential
    applies d1 to a canonically solved witness chain."""
    key = ("pd", r)
    if key in A._cache:
        return A._cache[key]
    field = A.field
    dims, quot = {}, {}
    for (p, q) in _page_bidegrees(A, r):
        if A.dim(p, q) == 0:
            continue
        Z = z_direct_subspace(A, r, p, q)
        B = b_direct_subspace(A, r, p, q)
        qd = quotient(Z, B)
        quot[(p, q)] = qd
        if qd.dim:
            dims[(p, q)] = qd.dim
    delta = {}
    for (p, q), d in dims.items():
        tkey = (p - r, q + 1 - r)
        tqd = quot.get(tkey)
        if tqd is None or tqd.dim == 0:
            continue
        if r == 0:
            delta[(p, q)] = tqd.project @ A.d0_at(p, q) @ quot[(p, q)].lift
            continue
        zw = witness_cycles(A, r, p, q)
        sel = z_matrix(A, r, p, q) @ zw.space.basis
        reps = quot[(p, q)].lift
        coords = solve_matrix(sel, reps)
        if coords is None:
            raise InvariantError("page representative admits no witness chain")
        chains = zw.space.basis @ coords
        last_off = zw.slot_offset(r - 1)
        last_dim = zw.slot_dims[r - 1]
        last = ExactMatrix(field, chains.data[last_off:last_off + last_dim], cols=chains.cols)
        delta[(p, q)] = tqd.project @ A.d1_at(p - r + 1, q - r + 1) @ last
    pg = BicomplexPage(r, A, RBigradedComplex(field, r, dims, delta), quot, "direct")
    A._cache[key] = pg
    return pg


def page_via_witness(A: Bicomplex, r: int) -> BicomplexPage:
    """E_r as ZW_r / w_r(BW_r), with the witness differential descended."""
    key = ("pw", r)
    if key in A._cache:
        return A._cache[key]
    field = A.field
    dims, quot = {}, {}
    for (p, q) in _page_bidegrees(A, r):
        zw = witness_cycles(A, r, p, q)
        if zw.space.dim == 0 and zw.ambient_dim == 0:
            continue
        bw = witness_boundaries(A, r, p, q - 1)
        W = image(w_matrix(A, r, p, q - 1) @ bw.space.basis)
        qd = quotient(zw.space, W)
        quot[(p, q)] = qd
        if qd.dim:
            dims[(p, q)] = qd.dim
    delta = {}
    for (p, q), d in dims.items():
        tkey = (p - r, q + 1 - r)
        tqd = quot.get(tkey)
        if tqd is None or tqd.dim == 0:
            continue
        delta[(p, q)] = tqd.project @ witness_delta_matrix(A, r, p, q) @ quot[(p, q)].lift
    pg = BicomplexPage(r, A, RBigradedComplex(field, r, dims, delta), quot, "witness")
    A._cache[key] = pg
    return pg


def induced_page_map(f: BicomplexMorphism, r: int, route: str = "direct") -> BigradedMorphism:
    """E_r(f) in the canonical bases of the chosen route."""
    if route == "direct":
        pa, pb = page_direct(f.source, r), page_direct(f.target, r)
        blocks = {}
        for (p, q) in pa.page.dims:
            if pb.page.dim(p, q) == 0:
                continue
            blocks[(p, q)] = pb.quot[(p, q)].project @ f.block(p, q) @ pa.quot[(p, q)].lift
        return BigradedMorphism(pa.page, pb.page, blocks)
    pa, pb = page_via_witness(f.source, r), page_via_witness(f.target, r)
    blocks = {}
    for (p, q) in pa.page.dims:
        if pb.page.dim(p, q) == 0:
            continue
        F = _witness_map_matrix(f, r, p, q)
        blocks[(p, q)] = pb.quot[(p, q)].project @ F @ pa.quot[(p, q)].lift
    return BigradedMorphism(pa.page, pb.page, blocks)


def _witness_map_matrix(f: BicomplexMorphism, r: int, p: int, q: int) -> ExactMatrix:
    """f acting slotwise on witness ambient coordinates."""
    za = witness_cycles(f.source, r, p, q)
    zb = witness_cycles(f.target, r, p, q)
    field = f.source.field
    grid = [[None] * len(za.slots) for _ in zb.slots]
    for k, spot in enumerate(za.slots):
        grid[k][k] = f.block(*spot)
    return ExactMatrix.block(field, grid, list(zb.slot_dims), list(za.slot_dims))


def is_er_quiso(f: BicomplexMorphism, r: int) -> bool:
    """E_r-quasi-isomorphism: E_{r+1}(f) is a bidegree-wise isomorphism."""
    return induced_page_map(f, r + 1).is_bidegreewise_iso()


def _witness_bidegrees(A: Bicomplex, r: int):
    """Bidegrees where ZW_r can be nonzero: the window plus r-1 diagonal steps."""
    if not A.dims:
        return []
    i_min, i_max, j_min, j_max = A.window()
    pad = max(r - 1, 0)
    return [
        (p, j)
        for p in range(i_min, i_max + pad + 1)
        for j in range(j_min, j_max + pad + 1)
    ]


def zw_map_surjective(f: BicomplexMorphism, r: int) -> bool:
    """Bidegree-wise surjectivity of ZW_r(f)."""
    A, B = f.source, f.target
    keys = set(_witness_bidegrees(A, r)) | set(_witness_bidegrees(B, r))
    for (p, q) in sorted(keys):
        zb = witness_cycles(B, r, p, q)
        if zb.space.dim == 0:
            continue
        za = witness_cycles(A, r, p, q)
        if za.space.dim == 0:
            return False
        img = image(_witness_map_matrix(f, r, p, q) @ za.space.basis)
        if not img.contains(zb.space):
            return False
    return True


def z_map_surjective(f: BicomplexMorphism, r: int) -> bool:
    """Bidegree-wise surjectivity of Z_r(f) (in-spot cycles)."""
    A, B = f.source, f.target
    keys = set(_page_bidegrees(A, r)) | set(_page_bidegrees(B, r))
    for (p, q) in sorted(keys):
        zb = z_direct_subspace(B, r, p, q)
        if zb.dim == 0:
            continue
        za = z_direct_subspace(A, r, p, q)
        if za.dim == 0:
            return False
        img = image(f.block(p, q) @ za.basis)
        if not img.contains(zb):
            return False
    return True


def e_map_surjective(f: BicomplexMorphism, r: int) -> bool:
    """Bidegree-wise surjectivity of E_r(f)."""
    m = induced_page_map(f, r)
    for key, d in m.target.dims.items():
        blk = m.blocks.get(key)
        if blk is None or blk.rank() < d:
            return False
    return True


# -- representing bicomplexes ----------------------------------------------------


def gen_D0(field: Field, i: int, j: int) -> Bicomplex:
    """The 0-disc: a 4-spot square of identities at (i, j)."""
    one = ExactMatrix.identity(field, 1)
    dims = {(i, j): 1, (i - 1, j): 1, (i, j + 1): 1, (i - 1, j + 1): 1}
    d0 = {(i, j): one, (i - 1, j): one}
    d1 = {(i, j): one, (i, j + 1): one}
    return Bicomplex(field, dims, d0, d1)


def gen_ZW(field: Field, r: int, i: int, j: int) -> Bicomplex:
    """The witness r-cycle representing staircase; ZW_0 is the 0-disc."""
    if r < 0:
        raise InvariantError("gen_ZW needs r >= 0")
    if r == 0:
        return gen_D0(field, i, j)
    one = ExactMatrix.identity(field, 1)
    dims, d0, d1 = {}, {}, {}
    for k in range(r):
        dims[(i - k, j - k)] = 1
        dims[(i - k - 1, j - k)] = 1
    for k in range(1, r):
        d0[(i - k, j - k)] = one
    for k in range(r):
        d1[(i - k, j - k)] = one
    return Bicomplex(field, dims, d0, d1)


def gen_BW(field: Field, r: int, i: int, j: int) -> Bicomplex:
    """Representing object of BW_r at its own bidegree (i, j)."""
    if r < 1:
        raise InvariantError("gen_BW needs r >= 1")
    if r == 1:
        return gen_D0(field, i, j)
    return direct_sum(
        direct_sum(gen_ZW(field, r - 1, i - 1, j), gen_D0(field, i, j)),
        gen_ZW(field, r - 1, i + r - 1, j + r - 1),
    )


def gen_iota(field: Field, r: int, i: int, j: int) -> BicomplexMorphism:
    """iota_r : ZW_r(i,j) -> BW_r(i,j-1), representing w_r."""
    if r < 1:
        raise InvariantError("gen_iota needs r >= 1")
    Z = gen_ZW(field, r, i, j)
    B = gen_BW(field, r, i, j - 1)
    one = field.one()
    blocks = {}
    for spot, dz in Z.dims.items():
        db = B.dim(*spot)
        if db == 0:
            raise InvariantError("iota target misses a staircase spot")
        blocks[spot] = ExactMatrix(field, [[one] for _ in range(db)], cols=1)
    return BicomplexMorphism(Z, B, blocks)


def add_morphism_unknown(sys, A: Bicomplex, B: Bicomplex, tag):
    """Declare unknown blocks for a morphism A -> B plus commutation equations."""
    field = A.field
    one = field.one()
    neg = field.neg(one)
    for k in set(A.dims):
        if B.dim(*k):
            sys.add_block((tag, k), B.dim(*k), A.dim(*k))
    for (i, j) in set(A.dims) | set(B.dims):
        sys.add_equation(
            (B.dim(i, j + 1), A.dim(i, j)),
            [
                (B.d0_at(i, j), (tag, (i, j)), None, one),
                (None, (tag, (i, j + 1)), A.d0_at(i, j), neg),
            ],
        )
        sys.add_equation(
            (B.dim(i - 1, j), A.dim(i, j)),
            [
                (B.d1_at(i, j), (tag, (i, j)), None, one),
                (None, (tag, (i - 1, j)), A.d1_at(i, j), neg),
            ],
        )


def zw_element_morphism(Y: Bicomplex, r: int, i: int, j: int, ambient_vec) -> BicomplexMorphism:
    """The morphism ZW_r(i,j) -> Y for a witness tuple in ambient coordinates.

    For r = 0 the representing object is the 0-disc and the vector is an
    element of Y^{i,j}.
    """
    field = Y.field
    if r == 0:
        return d0_element_morphism(Y, i, j, ambient_vec)
    G = gen_ZW(field, r, i, j)
    zw = witness_cycles(Y, r, i, j)
    blocks = {}
    for k in range(r):
        off = zw.slot_offset(k)
        d = zw.slot_dims[k]
        a_k = list(ambient_vec[off:off + d])
        spot = (i - k, j - k)
        if d:
            blocks[spot] = ExactMatrix.column(field, a_k)
        second = (i - k - 1, j - k)
        if Y.dim(*second):
            val = Y.d1_at(*spot).apply(a_k) if d else [field.zero()] * Y.dim(*second)
            blocks[second] = ExactMatrix.column(field, list(val))
    return BicomplexMorphism(G, Y, blocks)


def d0_element_morphism(Y: Bicomplex, i: int, j: int, vec) -> BicomplexMorphism:
    """The morphism D0(i,j) -> Y for an element of Y^{i,j}."""
    field = Y.field
    G = gen_D0(field, i, j)
    vec = list(vec)
    blocks = {}
    if Y.dim(i, j):
        blocks[(i, j)] = ExactMatrix.column(field, vec)
    v01 = Y.d0_at(i, j).apply(vec)
    if Y.dim(i, j + 1):
        blocks[(i, j + 1)] = ExactMatrix.column(field, list(v01))
    v10 = Y.d1_at(i, j).apply(vec)
    if Y.dim(i - 1, j):
        blocks[(i - 1, j)] = ExactMatrix.column(field, list(v10))
    if Y.dim(i - 1, j + 1):
        v11 = Y.d0_at(i - 1, j).apply(list(v10))
        blocks[(i - 1, j + 1)] = ExactMatrix.column(field, list(v11))
    return BicomplexMorphism(G, Y, blocks)


def bw_element_morphism(Y: Bicomplex, r: int, i: int, j: int, ambient_vec) -> BicomplexMorphism:
    """The morphism BW_r(i,j) -> Y for an element of BW_r^{i,j}(Y) in ambient
    coordinates (b-chain | a | c-chain)."""
    field = Y.field
    if r < 1:
        raise InvariantError("bw_element_morphism needs r >= 1")
    if r == 1:
        return d0_element_morphism(Y, i, j, ambient_vec)
    bw = witness_boundaries(Y, r, i, j)
    nb = witness_cycles(Y, r - 1, i + r - 1, j + r - 1).ambient_dim
    na = Y.dim(i, j)
    b_part = list(ambient_vec[:nb])
    a_part = list(ambient_vec[nb:nb + na])
    c_part = list(ambient_vec[nb + na:])
    mb = zw_element_morphism(Y, r - 1, i + r - 1, j + r - 1, b_part)
    ma = d0_element_morphism(Y, i, j, a_part)
    mc = zw_element_morphism(Y, r - 1, i - 1, j, c_part)
    G = gen_BW(field, r, i, j)
    blocks = {}
    for spot in G.dims:
        cols = []
        for m in (mc, ma, mb):  # concatenation order ZW(i-1,j) | D0 | ZW(i+r-1,...)
            if m.source.dim(*spot):
                cols.append(m.block(*spot))
        if not cols or Y.dim(*spot) == 0:
            continue
        blk = cols[0]
        for extra in cols[1:]:
            blk = blk.hstack(extra)
        blocks[spot] = blk
    return BicomplexMorphism(G, Y, blocks)


BICOMPLEX_SETS = ("I", "J0J", "Iprime", "Jprime")


def generators(field: Field, set_id: str, r: int, window) -> list[BicomplexMorphism]:
    """Generating (trivial) cofibrations with (i, j) over a finite window.

    window = (i_lo, i_hi, j_lo, j_hi).
    """
    i_lo, i_hi, j_lo, j_hi = window
    out = []
    zero = zero_bicomplex(field)

    def each_j(k):
        for i in range(i_lo, i_hi + 1):
            for j in range(j_lo, j_hi + 1):
                out.append(BicomplexMorphism(zero, gen_ZW(field, k, i, j), {}))

    def each_i(k):
        for i in range(i_lo, i_hi + 1):
            for j in range(j_lo, j_hi + 1):
                out.append(gen_iota(field, k, i, j))

    if set_id == "J0J":
        each_j(0)
        if r != 0:
            each_j(r)
    elif set_id == "I":
        each_i(r + 1)
    elif set_id == "Iprime":
        for k in range(1, r):
            each_j(k)
        each_i(r + 1)
    elif set_id == "Jprime":
        for k in range(0, r + 1):
            each_j(k)
    else:
        raise InvariantError(f"unknown bicomplex generator set {set_id!r}")
    return out
