"""Exact dense linear algebra over Q and F_p.

Everything here is deterministic: reduced echelon forms are unique, every
`Subspace` is stored in reduced column echelon form, quotient bases are
echelon complements and `solve` returns the free-variables-zero solution.
Equal inputs therefore give bit-identical outputs, which is what the golden
tests downstream rely on.

Matrices act on column vectors; an m x n matrix maps F^n -> F^m.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import Field


class DimensionError(ValueError):
    """Shape mismatch; inputs are rejected, never coerced."""


class ExactMatrix:
    """Immutable dense matrix with exact field entries."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: Field, data, cols: int | None = None):
        self.field = field
        rows = tuple(tuple(r) for r in data)
        self.rows = len(rows)
        if rows:
            self.cols = len(rows[0])
        else:
            self.cols = 0 if cols is None else cols
        if any(len(r) != self.cols for r in rows):
            raise DimensionError("ragged matrix data")
        self.data = rows

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zeros(field: Field, rows: int, cols: int) -> "ExactMatrix":
        z = field.zero()
        return ExactMatrix(field, [[z] * cols for _ in range(rows)], cols=cols)

    @staticmethod
    def identity(field: Field, n: int) -> "ExactMatrix":
        z, o = field.zero(), field.one()
        return ExactMatrix(field, [[o if i == j else z for j in range(n)] for i in range(n)])

    @staticmethod
    def from_ints(field: Field, data) -> "ExactMatrix":
        return ExactMatrix(field, [[field.of(x) for x in row] for row in data])

    @staticmethod
    def column(field: Field, entries) -> "ExactMatrix":
        return ExactMatrix(field, [[e] for e in entries], cols=1)

    @staticmethod
    def block(field: Field, grid, row_dims, col_dims) -> "ExactMatrix":
        """Assemble from a grid of blocks; None means a zero block."""
        out = []
        for bi, h in enumerate(row_dims):
            rows = [[] for _ in range(h)]
            for bj, w in enumerate(col_dims):
                blk = grid[bi][bj]
                if blk is None:
                    z = field.zero()
                    for r in rows:
                        r.extend([z] * w)
                else:
                    if blk.rows != h or blk.cols != w:
                        raise DimensionError("block shape mismatch")
                    for i, r in enumerate(rows):
                        r.extend(blk.data[i])
            out.extend(rows)
        total_cols = sum(col_dims)
        if not out:
            return ExactMatrix.zeros(field, 0, total_cols)
        return ExactMatrix(field, out)

    # -- basic operations -------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, ExactMatrix)
            and self.field == other.field
            and self.data == other.data
            and self.cols == other.cols
        )

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.data))

    def __repr__(self):
        body = "; ".join(" ".join(self.field.fmt(x) for x in row) for row in self.data)
        return f"ExactMatrix({self.field.spec}, {self.rows}x{self.cols}: {body})"

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._same_shape(other)
        add = self.field.add
        return ExactMatrix(
            self.field,
            [[add(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
            cols=self.cols,
        )

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._same_shape(other)
        sub = self.field.sub
        return ExactMatrix(
            self.field,
            [[sub(a, b) for a, b in zip(r1, r2)] for r1, r2 in zip(self.data, other.data)],
            cols=self.cols,
        )

    def __neg__(self) -> "ExactMatrix":
        neg = self.field.neg
        return ExactMatrix(self.field, [[neg(a) for a in r] for r in self.data], cols=self.cols)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        f = self.field
        add, mul, zero = f.add, f.mul, f.zero()
        ocols = other.cols
        out = []
        for arow in self.data:
            acc = [zero] * ocols
            for k, a in enumerate(arow):
                if f.is_zero(a):
                    continue
                brow = other.data[k]
                acc = [add(acc[j], mul(a, brow[j])) for j in range(ocols)]
            out.append(acc)
        if not out:
            return ExactMatrix.zeros(f, 0, ocols)
        return ExactMatrix(f, out)

    def scale(self, c) -> "ExactMatrix":
        mul = self.field.mul
        return ExactMatrix(self.field, [[mul(c, a) for a in r] for r in self.data], cols=self.cols)

    def transpose(self) -> "ExactMatrix":
        if self.rows == 0 or self.cols == 0:
            return ExactMatrix.zeros(self.field, self.cols, self.rows)
        return ExactMatrix(self.field, list(zip(*self.data)))

    def hstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.rows != other.rows:
            raise DimensionError("hstack row mismatch")
        return ExactMatrix(
            self.field,
            [r1 + r2 for r1, r2 in zip(self.data, other.data)],
            cols=self.cols + other.cols,
        )

    def vstack(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.cols:
            raise DimensionError("vstack column mismatch")
        return ExactMatrix(self.field, self.data + other.data, cols=self.cols)

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def columns(self, js) -> "ExactMatrix":
        js = list(js)
        return ExactMatrix(self.field, [[r[j] for j in js] for r in self.data], cols=len(js))

    def is_zero(self) -> bool:
        z = self.field.is_zero
        return all(z(a) for r in self.data for a in r)

    def apply(self, vec) -> tuple:
        """Matrix-vector product; vec is a flat sequence."""
        if len(vec) != self.cols:
            raise DimensionError("vector length mismatch")
        f = self.field
        out = []
        for row in self.data:
            acc = f.zero()
            for a, x in zip(row, vec):
                if not f.is_zero(a):
                    acc = f.add(acc, f.mul(a, x))
            out.append(acc)
        return tuple(out)

    def _same_shape(self, other: "ExactMatrix"):
        if self.rows != other.rows or self.cols != other.cols:
            raise DimensionError(f"shape mismatch {self.rows}x{self.cols} vs {other.rows}x{other.cols}")

    def rank(self) -> int:
        return len(rref(self)[1])

    def inverse(self) -> "ExactMatrix":
        if self.rows != self.cols:
            raise DimensionError("inverse of a non-square matrix")
        n = self.rows
        aug, pivots = rref(self.hstack(ExactMatrix.identity(self.field, n)))
        if pivots != list(range(n)):
            raise DimensionError("matrix is singular")
        return ExactMatrix(self.field, [row[n:] for row in aug.data], cols=n)


def rref(M: ExactMatrix) -> tuple[ExactMatrix, list[int]]:
    """Unique reduced row-echelon form of M and its pivot columns."""
    f = M.field
    rows = [list(r) for r in M.data]
    nr, nc = M.rows, M.cols
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        pr = None
        for i in range(r, nr):
            if not f.is_zero(rows[i][c]):
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = f.inv(rows[r][c])
        if inv != f.one():
            rows[r] = [f.mul(inv, x) for x in rows[r]]
        prow = rows[r]
        for i in range(nr):
            if i == r:
                continue
            factor = rows[i][c]
            if f.is_zero(factor):
                continue
            rows[i] = [f.sub(x, f.mul(factor, y)) for x, y in zip(rows[i], prow)]
        pivots.append(c)
        r += 1
    return ExactMatrix(f, rows) if nr else M, pivots


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of F^ambient_dim with a reduced column-echelon basis.

    The basis matrix is ambient_dim x dim; each column has a leading 1 in a
    distinct pivot row, pivot rows strictly increase with the column index,
    and pivot rows are cleared in all other columns. This form is unique per
    subspace.
    """

    field: Field
    ambient_dim: int
    basis: ExactMatrix

    @staticmethod
    def from_columns(field: Field, ambient_dim: int, cols: ExactMatrix) -> "Subspace":
        if cols.rows != ambient_dim:
            raise DimensionError("column height != ambient dimension")
        ech, pivots = rref(cols.transpose())
        rows = [ech.data[i] for i in range(len(pivots))]
        basis = ExactMatrix(field, rows).transpose() if rows else ExactMatrix.zeros(field, ambient_dim, 0)
        return Subspace(field, ambient_dim, basis)

    @staticmethod
    def zero(field: Field, ambient_dim: int) -> "Subspace":
        return Subspace(field, ambient_dim, ExactMatrix.zeros(field, ambient_dim, 0))

    @staticmethod
    def full(field: Field, ambient_dim: int) -> "Subspace":
        return Subspace(field, ambient_dim, ExactMatrix.identity(field, ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.cols

    def pivot_rows(self) -> list[int]:
        f = self.field
        out = []
        for j in range(self.basis.cols):
            for i in range(self.ambient_dim):
                if not f.is_zero(self.basis.data[i][j]):
                    out.append(i)
                    break
        return out

    def annihilator_rows(self) -> ExactMatrix:
        """Rows spanning {c : c . v = 0 for all v in the subspace}."""
        ker = kernel(self.basis.transpose())
        return ker.basis.transpose()

    def contains_vector(self, vec) -> bool:
        ann = self.annihilator_rows()
        return all(self.field.is_zero(x) for x in ann.apply(vec))

    def contains(self, other: "Subspace") -> bool:
        """True when other is contained in self."""
        self._same_ambient(other)
        if other.dim == 0:
            return True
        ann = self.annihilator_rows()
        return (ann @ other.basis).is_zero()

    def intersect(self, other: "Subspace") -> "Subspace":
        self._same_ambient(other)
        stacked = self.annihilator_rows().vstack(other.annihilator_rows())
        return kernel(stacked) if stacked.rows else Subspace.full(self.field, self.ambient_dim)

    def plus(self, other: "Subspace") -> "Subspace":
        self._same_ambient(other)
        return Subspace.from_columns(self.field, self.ambient_dim, self.basis.hstack(other.basis))

    def _same_ambient(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim or self.field != other.field:
            raise DimensionError("ambient mismatch")

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))


def kernel(M: ExactMatrix) -> Subspace:
    """Null space {x : Mx = 0} as a canonical Subspace of F^cols."""
    f = M.field
    n = M.cols
    ech, pivots = rref(M)
    free = [j for j in range(n) if j not in pivots]
    if not free:
        return Subspace.zero(f, n)
    cols = []
    for j in free:
        v = [f.zero()] * n
        v[j] = f.one()
        for i, pc in enumerate(pivots):
            v[pc] = f.neg(ech.data[i][j])
        cols.append(v)
    return Subspace.from_columns(f, n, ExactMatrix(f, cols).transpose())


def image(M: ExactMatrix) -> Subspace:
    """Column span of M."""
    return Subspace.from_columns(M.field, M.rows, M)


def solve(M: ExactMatrix, b) -> tuple | None:
    """Canonical solution of Mx = b (free variables zero), or None."""
    f = M.field
    if len(b) != M.rows:
        raise DimensionError("rhs length mismatch")
    aug = M.hstack(ExactMatrix.column(f, list(b)))
    ech, pivots = rref(aug)
    if M.cols in pivots:
        return None
    x = [f.zero()] * M.cols
    for i, pc in enumerate(pivots):
        x[pc] = ech.data[i][M.cols]
    return tuple(x)


def solve_matrix(M: ExactMatrix, B: ExactMatrix) -> ExactMatrix | None:
    """Columnwise canonical solve of MX = B, or None if any column fails."""
    f = M.field
    if B.rows != M.rows:
        raise DimensionError("rhs height mismatch")
    aug = M.hstack(B)
    ech, pivots = rref(aug)
    if any(p >= M.cols for p in pivots):
        return None
    cols = []
    for j in range(B.cols):
        x = [f.zero()] * M.cols
        for i, pc in enumerate(pivots):
            x[pc] = ech.data[i][M.cols + j]
        cols.append(x)
    return ExactMatrix(f, cols).transpose() if cols else ExactMatrix.zeros(f, M.cols, 0)


def preimage(M: ExactMatrix, U: Subspace) -> Subspace:
    """{x : Mx in U}, a subspace of the domain F^cols."""
    if U.ambient_dim != M.rows:
        raise DimensionError("ambient mismatch")
    ann = U.annihilator_rows()
    if ann.rows == 0:
        return Subspace.full(M.field, M.cols)
    return kernel(ann @ M)


@dataclass(frozen=True)
class QuotientData:
    """Quotient U/W with a deterministic basis.

    lift: ambient x dim, columns are the echelon-complement representatives.
    project: dim x ambient with project . lift = identity and project(W) = 0;
    on U it is the quotient map (it is extended canonically off U, but only
    values on U are contractually meaningful).
    """

    dim: int
    project: ExactMatrix
    lift: ExactMatrix


class BlockLinearSystem:
    """Linear system whose unknowns are the entries of named matrix blocks.

    Equations are accumulated entry-wise from matrix identities of the form
    sum_t  L_t @ X_{key_t} @ R_t = rhs, where L/R may be None (identity).
    Terms whose key was never declared contribute zero, so callers can state
    identities uniformly across degree windows.
    """

    def __init__(self, field: Field):
        self.field = field
        self.shapes: dict = {}
        self.offsets: dict = {}
        self.nvars = 0
        self._rows: list[dict] = []
        self._rhs: list = []

    def add_block(self, key, rows: int, cols: int):
        if key in self.shapes:
            raise DimensionError(f"block {key!r} declared twice")
        self.shapes[key] = (rows, cols)
        self.offsets[key] = self.nvars
        self.nvars += rows * cols

    def var_index(self, key, i: int, j: int) -> int:
        rows, cols = self.shapes[key]
        return self.offsets[key] + i * cols + j

    def add_equation(self, shape: tuple[int, int], terms, rhs: ExactMatrix | None = None):
        """terms: iterable of (L, key, R, sign) with sign a field scalar."""
        f = self.field
        m, n = shape
        live = []
        for (L, key, R, sign) in terms:
            if key not in self.shapes:
                continue
            rk, ck = self.shapes[key]
            if L is not None and (L.rows != m or L.cols != rk):
                raise DimensionError("left factor shape mismatch")
            if R is not None and (R.rows != ck or R.cols != n):
                raise DimensionError("right factor shape mismatch")
            live.append((L, key, R, sign))
        for a in range(m):
            for b in range(n):
                row: dict = {}
                for (L, key, R, sign) in live:
                    rk, ck = self.shapes[key]
                    us = range(rk) if L is not None else (a,)
                    for u in us:
                        lcoef = L.data[a][u] if L is not None else f.one()
                        if f.is_zero(lcoef):
                            continue
                        vs = range(ck) if R is not None else (b,)
                        for v in vs:
                            rcoef = R.data[v][b] if R is not None else f.one()
                            if f.is_zero(rcoef):
                                continue
                            c = f.mul(sign, f.mul(lcoef, rcoef))
                            if f.is_zero(c):
                                continue
                            idx = self.var_index(key, u, v)
                            row[idx] = f.add(row.get(idx, f.zero()), c)
                self._rows.append(row)
                self._rhs.append(rhs.data[a][b] if rhs is not None else f.zero())

    def add_entry_zero(self, terms, entries):
        """Constrain entries (i, j) of sum_t sign_t L_t @ X_{key_t} @ R_t to vanish."""
        f = self.field
        live = [(L, key, R, sign) for (L, key, R, sign) in terms if key in self.shapes]
        for (i, j) in entries:
            row: dict = {}
            for (L, key, R, sign) in live:
                rk, ck = self.shapes[key]
                us = range(rk) if L is not None else (i,)
                for u in us:
                    lcoef = L.data[i][u] if L is not None else f.one()
                    if f.is_zero(lcoef):
                        continue
                    vs = range(ck) if R is not None else (j,)
                    for v in vs:
                        rcoef = R.data[v][j] if R is not None else f.one()
                        if f.is_zero(rcoef):
                            continue
                        c = f.mul(sign, f.mul(lcoef, rcoef))
                        if f.is_zero(c):
                            continue
                        idx = self.var_index(key, u, v)
                        row[idx] = f.add(row.get(idx, f.zero()), c)
            self._rows.append(row)
            self._rhs.append(f.zero())

    def _matrix(self) -> tuple[ExactMatrix, list]:
        f = self.field
        z = f.zero()
        data = []
        for row in self._rows:
            dense = [z] * self.nvars
            for idx, c in row.items():
                dense[idx] = c
            data.append(dense)
        M = ExactMatrix(f, data, cols=self.nvars)
        return M, list(self._rhs)

    def solve_canonical(self) -> dict | None:
        """Free-variables-zero solution as blocks, or None if inconsistent."""
        M, rhs = self._matrix()
        x = solve(M, rhs)
        if x is None:
            return None
        return self.vector_to_blocks(x)

    def kernel_space(self) -> Subspace:
        """Solution space of the homogeneous system, in variable coordinates."""
        M, _ = self._matrix()
        return kernel(M)

    def vector_to_blocks(self, vec) -> dict:
        out = {}
        for key, (rows, cols) in self.shapes.items():
            off = self.offsets[key]
            data = [[vec[off + i * cols + j] for j in range(cols)] for i in range(rows)]
            out[key] = ExactMatrix(self.field, data, cols=cols) if rows else ExactMatrix.zeros(self.field, 0, cols)
        return out


def quotient(U: Subspace, W: Subspace) -> QuotientData:
    """Quotient data for W <= U; rejects W not contained in U."""
    if not U.contains(W):
        raise DimensionError("quotient: W is not contained in U")
    f = U.field
    n = U.ambient_dim
    wpiv = set(W.pivot_rows())
    upiv = U.pivot_rows()
    keep = [j for j, pr in enumerate(upiv) if pr not in wpiv]
    lift = U.basis.columns(keep)
    dim = len(keep)
    used = set(upiv)
    ext_rows = [i for i in range(n) if i not in used]
    cols = lift
    if W.dim:
        cols = cols.hstack(W.basis)
    if ext_rows:
        ext = ExactMatrix(
            f, [[f.one() if i == r else f.zero() for r in ext_rows] for i in range(n)]
        )
        cols = cols.hstack(ext)
    inv = cols.inverse()
    project = ExactMatrix(f, inv.data[:dim]) if dim else ExactMatrix.zeros(f, 0, n)
    return QuotientData(dim, project, lift)
