"""Filtered cochain complexes with bounded increasing filtrations.

A complex is stored in adapted-basis form: per degree an invertible
change-of-basis matrix whose first k_n(p) columns span F_p A^n. This makes
every filtration-compatibility condition a block-pattern check and every
page computation an echelon problem. Outside the stored windows the
convention is F_p = 0 below p_min - 1 and F_p = full above p_max; both
clamps are exact because filtrations are bounded and exhaustive.

Spectral sequence grading follows the column convention: the page entry at
bidegree (p, q) with q = n + p lives inside degree n, and the stage-r
differential has bidegree (-r, 1-r).
"""

from __future__ import annotations

from dataclasses import dataclass

from .bigraded import BigradedMorphism, InvariantError, RBigradedComplex, cohomology
from .fields import Field
from .linalg import (
    BlockLinearSystem,
    ExactMatrix,
    Subspace,
    image,
    kernel,
    preimage,
    quotient,
    solve_matrix,
)


class FilteredComplex:
    """Finite-support cochain complex with an adapted bounded filtration."""

    def __init__(self, field: Field, n_window, p_window, dims, basis, jumps, diff, check=True):
        self.field = field
        self.n_min, self.n_max = n_window
        self.p_min, self.p_max = p_window
        self.dims = {n: dims.get(n, 0) for n in range(self.n_min, self.n_max + 1)}
        self.basis = dict(basis)
        self.jumps = {n: tuple(jumps[n]) for n in jumps}
        self.diff = {n: m for n, m in diff.items() if m is not None and not m.is_zero()}
        self._cache: dict = {}
        if check:
            self._validate()

    # -- accessors ---------------------------------------------------------

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def degrees(self):
        return range(self.n_min, self.n_max + 1)

    def basis_at(self, n: int) -> ExactMatrix:
        b = self.basis.get(n)
        if b is None:
            return ExactMatrix.identity(self.field, self.dim(n))
        return b

    def basis_inv(self, n: int) -> ExactMatrix:
        key = ("binv", n)
        if key not in self._cache:
            self._cache[key] = self.basis_at(n).inverse()
        return self._cache[key]

    def d(self, n: int) -> ExactMatrix:
        m = self.diff.get(n)
        if m is None:
            return ExactMatrix.zeros(self.field, self.dim(n + 1), self.dim(n))
        return m

    def jump(self, n: int, p: int) -> int:
        if self.dim(n) == 0:
            return 0
        if p < self.p_min:
            return 0
        if p > self.p_max:
            return self.dim(n)
        return self.jumps[n][p - self.p_min]

    def weights(self, n: int) -> list[int]:
        """Weight of each adapted basis column: least p with the column in F_p."""
        key = ("w", n)
        if key not in self._cache:
            out = []
            for c in range(self.dim(n)):
                p = self.p_min
                while self.jump(n, p) <= c:
                    p += 1
                out.append(p)
            self._cache[key] = out
        return self._cache[key]

    def filtration(self, p: int, n: int) -> Subspace:
        """F_p A^n as a subspace of A^n in standard coordinates."""
        dim = self.dim(n)
        if dim == 0:
            return Subspace.zero(self.field, 0)
        k = self.jump(n, p)
        key = ("f", n, k)
        if key not in self._cache:
            cols = self.basis_at(n).columns(range(k))
            self._cache[key] = Subspace.from_columns(self.field, dim, cols)
        return self._cache[key]

    # -- validation ----------------------------------------------------------

    def _validate(self):
        if self.n_min > self.n_max or self.p_min > self.p_max:
            raise InvariantError("empty degree or filtration window")
        for n in self.degrees():
            dim = self.dim(n)
            if dim < 0:
                raise InvariantError(f"negative dimension at degree {n}")
            if dim == 0:
                continue
            j = self.jumps.get(n)
            if j is None or len(j) != self.p_max - self.p_min + 1:
                raise InvariantError(f"jump vector missing or wrong length at degree {n}")
            if any(a > b for a, b in zip(j, j[1:])) or any(k < 0 for k in j):
                raise InvariantError(f"jump vector not non-decreasing at degree {n}")
            if j[-1] != dim:
                raise InvariantError(f"filtration not exhaustive at degree {n}")
            b = self.basis_at(n)
            if b.rows != dim or b.cols != dim:
                raise InvariantError(f"adapted basis has wrong shape at degree {n}")
            if b.rank() != dim:
                raise InvariantError(f"adapted basis singular at degree {n}")
        for n, m in self.diff.items():
            if m.cols != self.dim(n) or m.rows != self.dim(n + 1):
                raise InvariantError(f"differential shape mismatch at degree {n}")
        for n in self.degrees():
            if self.dim(n) and self.dim(n + 1) and self.dim(n + 2):
                if not (self.d(n + 1) @ self.d(n)).is_zero():
                    raise InvariantError(f"d.d != 0 at degree {n}")
        for n in self.degrees():
            if self.dim(n) == 0 or self.dim(n + 1) == 0:
                continue
            dad = self.basis_inv(n + 1) @ self.d(n) @ self.basis_at(n)
            ws, wt = self.weights(n), self.weights(n + 1)
            for c in range(self.dim(n)):
                for rr in range(self.dim(n + 1)):
                    if wt[rr] > ws[c] and not self.field.is_zero(dad.data[rr][c]):
                        raise InvariantError(f"d does not respect the filtration at degree {n}")

    # -- structural equality (canonical forms) ------------------------------

    def __eq__(self, other):
        if not isinstance(other, FilteredComplex):
            return NotImplemented
        return (
            self.field == other.field
            and (self.n_min, self.n_max) == (other.n_min, other.n_max)
            and (self.p_min, self.p_max) == (other.p_min, other.p_max)
            and self.dims == other.dims
            and {n: self.jumps.get(n) for n in self.degrees() if self.dim(n)}
            == {n: other.jumps.get(n) for n in other.degrees() if other.dim(n)}
            and all(self.basis_at(n) == other.basis_at(n) for n in self.degrees())
            and all(self.d(n) == other.d(n) for n in self.degrees())
        )


class FilteredMorphism:
    """Chain map compatible with the filtrations."""

    def __init__(self, source: FilteredComplex, target: FilteredComplex, blocks, check=True):
        if source.field != target.field:
            raise InvariantError("morphism endpoints over different fields")
        self.source = source
        self.target = target
        self.blocks = {n: b for n, b in blocks.items() if b is not None and not b.is_zero()}
        if check:
            self._validate()

    def block(self, n: int) -> ExactMatrix:
        b = self.blocks.get(n)
        if b is None:
            return ExactMatrix.zeros(self.source.field, self.target.dim(n), self.source.dim(n))
        return b

    def _validate(self):
        A, B = self.source, self.target
        for n, b in self.blocks.items():
            if b.cols != A.dim(n) or b.rows != B.dim(n):
                raise InvariantError(f"morphism block shape mismatch at degree {n}")
        for n in range(min(A.n_min, B.n_min), max(A.n_max, B.n_max) + 1):
            if A.dim(n) and (B.d(n) @ self.block(n)) != (self.block(n + 1) @ A.d(n)):
                raise InvariantError(f"morphism does not commute with d at degree {n}")
        for n in A.degrees():
            if A.dim(n) == 0 or B.dim(n) == 0:
                continue
            fad = B.basis_inv(n) @ self.block(n) @ A.basis_at(n)
            ws, wt = A.weights(n), B.weights(n)
            for c in range(A.dim(n)):
                for rr in range(B.dim(n)):
                    if wt[rr] > ws[c] and not A.field.is_zero(fad.data[rr][c]):
                        raise InvariantError(f"morphism not filtration-compatible at degree {n}")


@dataclass
class SpectralPage:
    """Stage r with cycle-representative lifts back into the ambient complex."""

    r: int
    complex: FilteredComplex
    page: RBigradedComplex
    quot: dict  # (p, q) -> QuotientData, lifts land in Z_r inside A^{q-p}

    def dim(self, p: int, q: int) -> int:
        return self.page.dim(p, q)


@dataclass
class FilteredHomotopy:
    """Degree -1 maps h^n : A^n -> B^{n-1} with h(F_p) inside F_{p+r}."""

    r: int
    source: FilteredComplex
    target: FilteredComplex
    maps: dict  # n -> ExactMatrix of shape dim_B(n-1) x dim_A(n)

    def block(self, n: int) -> ExactMatrix:
        m = self.maps.get(n)
        if m is None:
            return ExactMatrix.zeros(self.source.field, self.target.dim(n - 1), self.source.dim(n))
        return m


# -- constructors ------------------------------------------------------------


def from_weights(field: Field, weights_by_degree: dict, diffs: dict, check=True) -> FilteredComplex:
    """Complex whose adapted basis is the identity; weights must be sorted."""
    if not weights_by_degree or all(not w for w in weights_by_degree.values()):
        return zero_complex(field)
    degs = [n for n, w in weights_by_degree.items() if w]
    n_min, n_max = min(degs), max(degs)
    allw = [w for ws in weights_by_degree.values() for w in ws]
    p_min, p_max = min(allw), max(allw)
    dims, basis, jumps = {}, {}, {}
    for n in range(n_min, n_max + 1):
        ws = list(weights_by_degree.get(n, []))
        if sorted(ws) != ws:
            raise InvariantError("weights must be non-decreasing along the adapted basis")
        dims[n] = len(ws)
        if ws:
            basis[n] = ExactMatrix.identity(field, len(ws))
            jumps[n] = tuple(sum(1 for w in ws if w <= p) for p in range(p_min, p_max + 1))
    diff = {n: m for n, m in diffs.items() if n_min <= n <= n_max}
    return FilteredComplex(field, (n_min, n_max), (p_min, p_max), dims, basis, jumps, diff, check=check)


def zero_complex(field: Field) -> FilteredComplex:
    return FilteredComplex(field, (0, 0), (0, 0), {0: 0}, {}, {}, {}, check=False)


def is_zero(A: FilteredComplex) -> bool:
    return all(A.dim(n) == 0 for n in A.degrees())


def direct_sum(A: FilteredComplex, B: FilteredComplex) -> FilteredComplex:
    """Sum with adapted bases merged in non-decreasing weight order (A first)."""
    if is_zero(A):
        return B
    if is_zero(B):
        return A
    field = A.field
    n_min, n_max = min(A.n_min, B.n_min), max(A.n_max, B.n_max)
    p_min, p_max = min(A.p_min, B.p_min), max(A.p_max, B.p_max)
    dims, basis, jumps, diff = {}, {}, {}, {}
    for n in range(n_min, n_max + 1):
        da, db = A.dim(n), B.dim(n)
        dims[n] = da + db
        if dims[n] == 0:
            continue
        cols = [("A", i, w) for i, w in enumerate(A.weights(n))] + [
            ("B", i, w) for i, w in enumerate(B.weights(n))
        ]
        cols.sort(key=lambda t: (t[2], t[0], t[1]))
        ca, cb = A.basis_at(n), B.basis_at(n)
        z = field.zero()
        mat = []
        for row in range(da + db):
            mat.append([z] * (da + db))
        for j, (src, i, _w) in enumerate(cols):
            if src == "A":
                for row in range(da):
                    mat[row][j] = ca.data[row][i]
            else:
                for row in range(db):
                    mat[da + row][j] = cb.data[row][i]
        basis[n] = ExactMatrix(field, mat)
        ws = [t[2] for t in cols]
        jumps[n] = tuple(sum(1 for w in ws if w <= p) for p in range(p_min, p_max + 1))
        dmat = ExactMatrix.block(
            field,
            [[A.d(n) if da and A.dim(n + 1) else None, None],
             [None, B.d(n) if db and B.dim(n + 1) else None]],
            [A.dim(n + 1), B.dim(n + 1)],
            [da, db],
        )
        if not dmat.is_zero():
            diff[n] = dmat
    return FilteredComplex(field, (n_min, n_max), (p_min, p_max), dims, basis, jumps, diff)


def summand_inclusion(A: FilteredComplex, B: FilteredComplex, which: str) -> FilteredMorphism:
    """Inclusion of A (which="A") or B into direct_sum(A, B)."""
    S = direct_sum(A, B)
    blocks = {}
    X = A if which == "A" else B
    off_in_sum = 0 if which == "A" else 1
    for n in X.degrees():
        if X.dim(n) == 0:
            continue
        da = A.dim(n)
        rows = S.dim(n)
        m = ExactMatrix.zeros(S.field, rows, X.dim(n))
        data = [list(r) for r in m.data]
        off = 0 if off_in_sum == 0 else da
        for i in range(X.dim(n)):
            data[off + i][i] = S.field.one()
        blocks[n] = ExactMatrix(S.field, data)
    return FilteredMorphism(X, S, blocks)


def summand_projection(A: FilteredComplex, B: FilteredComplex, which: str) -> FilteredMorphism:
    """Projection of direct_sum(A, B) onto A or B."""
    S = direct_sum(A, B)
    blocks = {}
    X = A if which == "A" else B
    for n in S.degrees():
        if X.dim(n) == 0 or S.dim(n) == 0:
            continue
        da = A.dim(n)
        m = ExactMatrix.zeros(S.field, X.dim(n), S.dim(n))
        data = [list(r) for r in m.data]
        off = 0 if which == "A" else da
        for i in range(X.dim(n)):
            data[i][off + i] = S.field.one()
        blocks[n] = ExactMatrix(S.field, data)
    return FilteredMorphism(S, X, blocks)


# -- morphism utilities -------------------------------------------------------


def identity_morphism(A: FilteredComplex) -> FilteredMorphism:
    blocks = {n: ExactMatrix.identity(A.field, A.dim(n)) for n in A.degrees() if A.dim(n)}
    return FilteredMorphism(A, A, blocks, check=False)


def zero_morphism(A: FilteredComplex, B: FilteredComplex) -> FilteredMorphism:
    return FilteredMorphism(A, B, {}, check=False)


def compose(g: FilteredMorphism, f: FilteredMorphism) -> FilteredMorphism:
    blocks = {}
    for n in f.source.degrees():
        if f.source.dim(n) and g.target.dim(n):
            blocks[n] = g.block(n) @ f.block(n)
    return FilteredMorphism(f.source, g.target, blocks, check=False)


def morphism_sum(f: FilteredMorphism, g: FilteredMorphism) -> FilteredMorphism:
    """f + g for parallel morphisms."""
    blocks = {}
    for n in set(f.blocks) | set(g.blocks):
        blocks[n] = f.block(n) + g.block(n)
    return FilteredMorphism(f.source, f.target, blocks)


def direct_sum_morphism(f: FilteredMorphism, g: FilteredMorphism) -> FilteredMorphism:
    """f + g : A1+A2 -> B1+B2 in the canonical sum presentations."""
    SA = direct_sum(f.source, g.source)
    SB = direct_sum(f.target, g.target)
    iB1 = summand_inclusion(f.target, g.target, "A")
    iB2 = summand_inclusion(f.target, g.target, "B")
    pA1 = summand_projection(f.source, g.source, "A")
    pA2 = summand_projection(f.source, g.source, "B")
    blocks = {}
    for n in SA.degrees():
        if SA.dim(n) == 0 or SB.dim(n) == 0:
            continue
        blocks[n] = (iB1.block(n) @ f.block(n) @ pA1.block(n)) + (
            iB2.block(n) @ g.block(n) @ pA2.block(n)
        )
    return FilteredMorphism(SA, SB, blocks)


# -- pages: Z_r, B_r, E_r ------------------------------------------------------


def z_subspace(A: FilteredComplex, r: int, p: int, n: int) -> Subspace:
    """Z_r at filtration p, degree n: F_p A^n meet d^{-1}(F_{p-r} A^{n+1})."""
    key = ("z", r, p, n)
    if key in A._cache:
        return A._cache[key]
    if A.dim(n) == 0:
        out = Subspace.zero(A.field, 0)
    else:
        out = A.filtration(p, n).intersect(preimage(A.d(n), A.filtration(p - r, n + 1)))
    A._cache[key] = out
    return out


def b_subspace(A: FilteredComplex, r: int, p: int, n: int) -> Subspace:
    """B_r at filtration p, degree n: Z_{r-1}^{p-1} + d Z_{r-1}^{p+r-1} (B_0 = F_{p-1})."""
    key = ("b", r, p, n)
    if key in A._cache:
        return A._cache[key]
    if A.dim(n) == 0:
        out = Subspace.zero(A.field, 0)
    elif r == 0:
        out = A.filtration(p - 1, n)
    else:
        first = z_subspace(A, r - 1, p - 1, n)
        prev = z_subspace(A, r - 1, p + r - 1, n - 1)
        if A.dim(n - 1) == 0 or prev.dim == 0:
            out = first
        else:
            out = first.plus(image(A.d(n - 1) @ prev.basis))
    A._cache[key] = out
    return out


def page(A: FilteredComplex, r: int) -> SpectralPage:
    """Stage r of the spectral sequence, with representative lifts."""
    key = ("page", r)
    if key in A._cache:
        return A._cache[key]
    field = A.field
    dims, quot = {}, {}
    for n in A.degrees():
        if A.dim(n) == 0:
            continue
        for p in range(A.p_min, A.p_max + 1):
            q = n + p
            Z = z_subspace(A, r, p, n)
            B = b_subspace(A, r, p, n)
            qd = quotient(Z, B)
            quot[(p, q)] = qd
            if qd.dim:
                dims[(p, q)] = qd.dim
    delta = {}
    for (p, q), d in dims.items():
        n = q - p
        tkey = (p - r, q + 1 - r)
        tq = quot.get(tkey)
        if tq is None or tq.dim == 0:
            continue
        delta[(p, q)] = tq.project @ A.d(n) @ quot[(p, q)].lift
    sp = SpectralPage(r, A, RBigradedComplex(field, r, dims, delta), quot)
    A._cache[key] = sp
    return sp


def induced_page_map(f: FilteredMorphism, r: int) -> BigradedMorphism:
    """E_r(f) in the canonical page bases."""
    pa, pb = page(f.source, r), page(f.target, r)
    blocks = {}
    for (p, q), d in pa.page.dims.items():
        if pb.page.dim(p, q) == 0:
            continue
        n = q - p
        blocks[(p, q)] = pb.quot[(p, q)].project @ f.block(n) @ pa.quot[(p, q)].lift
    return BigradedMorphism(pa.page, pb.page, blocks)


def is_er_quiso(f: FilteredMorphism, r: int) -> bool:
    """E_r-quasi-isomorphism: E_{r+1}(f) is a bidegree-wise isomorphism."""
    return induced_page_map(f, r + 1).is_bidegreewise_iso()


def stabilization_bound(A: FilteredComplex) -> int:
    return A.p_max - A.p_min + 1


# -- the r-cycles complex and Z_r-quasi-isomorphisms ---------------------------


def z_complex(A: FilteredComplex, r: int, p_top: int | None = None):
    """(Z_r(A), d) as an r-bigraded complex, with the cycle bases.

    Z_r^{p,*} equals A^n for p >= p_top + r, so columns are only materialized
    up to p_top + 3r; every bidegree with p <= p_top + 2r is then computed
    with both its neighbouring columns present, and the condition at any
    larger p repeats the fully-stable column p_top + 2r verbatim. p_top
    defaults to p_max; pass the larger of two windows when comparing.
    """
    if p_top is None:
        p_top = A.p_max
    key = ("zcx", r, p_top)
    if key in A._cache:
        return A._cache[key]
    field = A.field
    hi = p_top + 3 * r
    dims, bases = {}, {}
    for n in A.degrees():
        if A.dim(n) == 0:
            continue
        for p in range(A.p_min, hi + 1):
            Z = z_subspace(A, r, p, n)
            if Z.dim:
                dims[(p, n + p)] = Z.dim
                bases[(p, n + p)] = Z.basis
    delta = {}
    for (p, q) in dims:
        n = q - p
        tkey = (p - r, q + 1 - r)
        if tkey not in dims:
            continue
        blk = solve_matrix(bases[tkey], A.d(n) @ bases[(p, q)])
        if blk is None:
            raise InvariantError("d does not restrict to Z_r")
        delta[(p, q)] = blk
    cx = RBigradedComplex(field, r, dims, delta, check=False)
    A._cache[key] = (cx, bases)
    return A._cache[key]


def is_zr_quiso(f: FilteredMorphism, r: int) -> bool:
    """Z_r-quasi-isomorphism, tested through the r-bigraded cycles complex."""
    A, B = f.source, f.target
    p_top = max(A.p_max, B.p_max)
    ca, basa = z_complex(A, r, p_top)
    cb, basb = z_complex(B, r, p_top)
    blocks = {}
    for key, basis in basa.items():
        if key not in basb:
            continue
        n = key[1] - key[0]
        blk = solve_matrix(basb[key], f.block(n) @ basis)
        if blk is None:
            raise InvariantError("f does not map Z_r into Z_r")
        blocks[key] = blk
    g = BigradedMorphism(ca, cb, blocks, check=False)
    ha, hb = cohomology(ca), cohomology(cb)
    from .bigraded import induced_cohomology_map

    hblocks = induced_cohomology_map(g)
    safe_hi = p_top + 2 * r
    for (p, q) in set(ha.module.dims) | set(hb.module.dims):
        if p > safe_hi:
            continue
        if ha.dim(p, q) != hb.dim(p, q):
            return False
        blk = hblocks.get((p, q))
        if blk is not None and blk.rows and blk.rank() != blk.rows:
            return False
    return True


def z_map_surjective(f: FilteredMorphism, r: int) -> bool:
    """Bidegree-wise surjectivity of Z_r(f)."""
    A, B = f.source, f.target
    hi = max(A.p_max, B.p_max) + 2 * r + 1
    lo = min(A.p_min, B.p_min)
    for n in range(min(A.n_min, B.n_min), max(A.n_max, B.n_max) + 1):
        if B.dim(n) == 0:
            continue
        for p in range(lo, hi + 1):
            zb = z_subspace(B, r, p, n)
            if zb.dim == 0:
                continue
            if A.dim(n) == 0:
                return False
            za = z_subspace(A, r, p, n)
            if za.dim == 0:
                return False
            img = image(f.block(n) @ za.basis)
            if not img.contains(zb):
                return False
    return True


def e_map_surjective(f: FilteredMorphism, r: int) -> bool:
    """Bidegree-wise surjectivity of E_r(f)."""
    m = induced_page_map(f, r)
    for key, d in m.target.dims.items():
        blk = m.blocks.get(key)
        if blk is None or blk.rank() < d:
            return False
    return True


# -- shift and decalage ---------------------------------------------------------


def flag_adapt(field: Field, chain: list[Subspace]):
    """Adapted basis and jump vector for an increasing chain of subspaces.

    Deterministic: scans each stage's echelon basis in order and keeps the
    columns that enlarge the span so far.
    """
    if not chain:
        raise InvariantError("empty flag")
    dim = chain[0].ambient_dim
    picked: list[tuple] = []
    reduced_rows: list[list] = []
    jumps = []

    def reduce_vector(vec):
        v = list(vec)
        for row in reduced_rows:
            lead = next(i for i, x in enumerate(row) if not field.is_zero(x))
            c = v[lead]
            if field.is_zero(c):
                continue
            inv = field.inv(row[lead])
            factor = field.mul(c, inv)
            v = [field.sub(a, field.mul(factor, b)) for a, b in zip(v, row)]
        return v

    for V in chain:
        for j in range(V.basis.cols):
            vec = V.basis.col(j)
            rem = reduce_vector(vec)
            if any(not field.is_zero(x) for x in rem):
                picked.append(vec)
                reduced_rows.append(rem)
                reduced_rows.sort(key=lambda row: next(i for i, x in enumerate(row) if not field.is_zero(x)))
        jumps.append(len(picked))
    if jumps[-1] != dim:
        raise InvariantError("flag does not exhaust the ambient space")
    basis = ExactMatrix(field, [list(col) for col in picked], cols=dim).transpose() if picked else ExactMatrix.zeros(field, dim, 0)
    if basis.cols != dim:
        raise InvariantError("flag adaptation produced a non-basis")
    return basis, tuple(jumps)


def shift(A: FilteredComplex, r: int) -> FilteredComplex:
    """S^r: same complex, filtration S^r F_p A^n = F_{p+rn} A^n."""
    if r == 0 or is_zero(A):
        return A
    p_min = min(A.p_min - r * n for n in A.degrees())
    p_max = max(A.p_max - r * n for n in A.degrees())
    jumps = {}
    for n in A.degrees():
        if A.dim(n) == 0:
            continue
        jumps[n] = tuple(A.jump(n, p + r * n) for p in range(p_min, p_max + 1))
    return FilteredComplex(
        A.field, (A.n_min, A.n_max), (p_min, p_max), dict(A.dims), dict(A.basis), jumps, dict(A.diff)
    )


def decalage(A: FilteredComplex, r: int) -> FilteredComplex:
    """Dec^r: same complex, filtration Z_r^{p-rn, p-rn+n} in degree n."""
    if r == 0 or is_zero(A):
        return A
    p_min = min(A.p_min + r * n for n in A.degrees())
    p_max = max(A.p_max + r + r * n for n in A.degrees())
    basis, jumps = {}, {}
    for n in A.degrees():
        if A.dim(n) == 0:
            continue
        chain = [z_subspace(A, r, p - r * n, n) for p in range(p_min, p_max + 1)]
        b, j = flag_adapt(A.field, chain)
        basis[n] = b
        jumps[n] = j
    return FilteredComplex(
        A.field, (A.n_min, A.n_max), (p_min, p_max), dict(A.dims), basis, jumps, dict(A.diff)
    )


def shift_morphism(f: FilteredMorphism, r: int) -> FilteredMorphism:
    return FilteredMorphism(shift(f.source, r), shift(f.target, r), dict(f.blocks))


def decalage_morphism(f: FilteredMorphism, r: int) -> FilteredMorphism:
    return FilteredMorphism(decalage(f.source, r), decalage(f.target, r), dict(f.blocks))


def canonicalize(A: FilteredComplex) -> FilteredComplex:
    """Canonical presentation: trimmed windows, flag-adapted canonical bases.

    Two filtered complexes are equal as filtered objects iff their canonical
    presentations compare equal field-by-field; this is what makes
    Dec^r(S^r(A)) = A a literal equality test.
    """
    degs = [n for n in A.degrees() if A.dim(n)]
    if not degs:
        return zero_complex(A.field)
    n_min, n_max = min(degs), max(degs)
    p_lo, p_hi = None, None
    for n in degs:
        first = next(p for p in range(A.p_min, A.p_max + 1) if A.jump(n, p) > 0)
        full = next(p for p in range(A.p_min, A.p_max + 1) if A.jump(n, p) == A.dim(n))
        p_lo = first if p_lo is None else min(p_lo, first)
        p_hi = full if p_hi is None else max(p_hi, full)
    dims, basis, jumps, diff = {}, {}, {}, {}
    for n in range(n_min, n_max + 1):
        dims[n] = A.dim(n)
        if dims[n] == 0:
            continue
        chain = [A.filtration(p, n) for p in range(p_lo, p_hi + 1)]
        b, j = flag_adapt(A.field, chain)
        basis[n] = b
        jumps[n] = j
        if A.dim(n + 1) and n + 1 <= n_max and not A.d(n).is_zero():
            diff[n] = A.d(n)
    return FilteredComplex(A.field, (n_min, n_max), (p_lo, p_hi), dims, basis, jumps, diff, check=False)


# -- translations, cones, homotopies ---------------------------------------------


def r_cone(f: FilteredMorphism, r: int) -> FilteredComplex:
    """C_r(f)^n = A^{n+1} + B^n, filtration F_{p-r} + F_p, D(a,b) = (da, f(a)-db)."""
    A, B = f.source, f.target
    field = A.field
    n_min = min(A.n_min - 1, B.n_min)
    n_max = max(A.n_max - 1, B.n_max)
    p_min = min(A.p_min + r, B.p_min)
    p_max = max(A.p_max + r, B.p_max)
    dims, basis, jumps, diff = {}, {}, {}, {}
    for n in range(n_min, n_max + 1):
        da, db = A.dim(n + 1), B.dim(n)
        dims[n] = da + db
        if dims[n] == 0:
            continue
        cols = [("A", i, w + r) for i, w in enumerate(A.weights(n + 1))] + [
            ("B", i, w) for i, w in enumerate(B.weights(n))
        ]
        cols.sort(key=lambda t: (t[2], t[0], t[1]))
        ca, cb = A.basis_at(n + 1), B.basis_at(n)
        z = field.zero()
        mat = [[z] * (da + db) for _ in range(da + db)]
        for j, (src, i, _w) in enumerate(cols):
            if src == "A":
                for row in range(da):
                    mat[row][j] = ca.data[row][i]
            else:
                for row in range(db):
                    mat[da + row][j] = cb.data[row][i]
        basis[n] = ExactMatrix(field, mat)
        ws = [t[2] for t in cols]
        jumps[n] = tuple(sum(1 for w in ws if w <= p) for p in range(p_min, p_max + 1))
    for n in range(n_min, n_max + 1):
        da, db = A.dim(n + 1), B.dim(n)
        ta, tb = A.dim(n + 2), B.dim(n + 1)
        if (da + db) == 0 or (ta + tb) == 0:
            continue
        blk = ExactMatrix.block(
            field,
            [[A.d(n + 1), None], [f.block(n + 1), -B.d(n)]],
            [ta, tb],
            [da, db],
        )
        if not blk.is_zero():
            diff[n] = blk
    return FilteredComplex(field, (n_min, n_max), (p_min, p_max), dims, basis, jumps, diff)


def m_r(A: FilteredComplex, r: int):
    """M_r(A) with F_p = F_p A^n + F_{p+r} A^{n-1} and its projection to A."""
    if is_zero(A):
        return A, identity_morphism(A)
    field = A.field
    n_min, n_max = A.n_min, A.n_max + 1
    p_min, p_max = A.p_min - r, A.p_max
    dims, basis, jumps, diff = {}, {}, {}, {}
    for n in range(n_min, n_max + 1):
        da, db = A.dim(n), A.dim(n - 1)
        dims[n] = da + db
        if dims[n] == 0:
            continue
        cols = [("A", i, w) for i, w in enumerate(A.weights(n))] + [
            ("B", i, w - r) for i, w in enumerate(A.weights(n - 1))
        ]
        cols.sort(key=lambda t: (t[2], t[0], t[1]))
        ca, cb = A.basis_at(n), A.basis_at(n - 1)
        z = field.zero()
        mat = [[z] * (da + db) for _ in range(da + db)]
        for j, (src, i, _w) in enumerate(cols):
            if src == "A":
                for row in range(da):
                    mat[row][j] = ca.data[row][i]
            else:
                for row in range(db):
                    mat[da + row][j] = cb.data[row][i]
        basis[n] = ExactMatrix(field, mat)
        ws = [t[2] for t in cols]
        jumps[n] = tuple(sum(1 for w in ws if w <= p) for p in range(p_min, p_max + 1))
    for n in range(n_min, n_max + 1):
        da, db = A.dim(n), A.dim(n - 1)
        ta, tb = A.dim(n + 1), A.dim(n)
        if (da + db) == 0 or (ta + tb) == 0:
            continue
        # D(a, b) = (da, a - db)
        blk = ExactMatrix.block(
            field,
            [[A.d(n), None], [ExactMatrix.identity(field, da), -A.d(n - 1)]],
            [ta, tb],
            [da, db],
        )
        if not blk.is_zero():
            diff[n] = blk
    M = FilteredComplex(field, (n_min, n_max), (p_min, p_max), dims, basis, jumps, diff)
    blocks = {}
    for n in M.degrees():
        da = A.dim(n)
        if da == 0 or M.dim(n) == 0:
            continue
        blocks[n] = ExactMatrix.block(field, [[ExactMatrix.identity(field, da), None]], [da], [da, A.dim(n - 1)])
    pi1 = FilteredMorphism(M, A, blocks)
    return M, pi1


def check_r_homotopy(h: FilteredHomotopy, f: FilteredMorphism, g: FilteredMorphism) -> bool:
    """dh + hd = g - f together with the filtration shift h(F_p) in F_{p+r}."""
    A, B = h.source, h.target
    if f.source is not A or g.source is not A or f.target is not B or g.target is not B:
        if (f.source != A) or (g.source != A) or (f.target != B) or (g.target != B):
            raise InvariantError("homotopy endpoints do not match the morphisms")
    r = h.r
    for n in A.degrees():
        if A.dim(n) == 0:
            continue
        hm = h.block(n)
        if hm.cols != A.dim(n) or hm.rows != B.dim(n - 1):
            return False
        if B.dim(n - 1):
            had = B.basis_inv(n - 1) @ hm @ A.basis_at(n)
            ws, wt = A.weights(n), B.weights(n - 1)
            for c in range(A.dim(n)):
                for rr in range(B.dim(n - 1)):
                    if wt[rr] > ws[c] + r and not A.field.is_zero(had.data[rr][c]):
                        return False
        lhs = (B.d(n - 1) @ hm) + (h.block(n + 1) @ A.d(n))
        if lhs != (g.block(n) - f.block(n)):
            return False
    return True


def page_equality_under_homotopy(h: FilteredHomotopy, f: FilteredMorphism, g: FilteredMorphism) -> bool:
    """Verified r-homotopic morphisms induce equal matrices on page r+1."""
    if not check_r_homotopy(h, f, g):
        return False
    mf = induced_page_map(f, h.r + 1)
    mg = induced_page_map(g, h.r + 1)
    keys = set(mf.source.dims) | set(mf.target.dims)
    return all(mf.block(*k) == mg.block(*k) for k in keys)


def contraction_of_m_r(A: FilteredComplex, r: int) -> FilteredHomotopy:
    """The homotopy (a, b) -> (b, 0) certifying id ~_r 0 on M_r(A)."""
    M, _ = m_r(A, r)
    field = A.field
    maps = {}
    for n in M.degrees():
        src_a, src_b = A.dim(n), A.dim(n - 1)
        tgt_a, tgt_b = A.dim(n - 1), A.dim(n - 2)
        if (src_a + src_b) == 0 or (tgt_a + tgt_b) == 0:
            continue
        blk = ExactMatrix.block(
            field,
            [[None, ExactMatrix.identity(field, src_b) if src_b else None], [None, None]],
            [tgt_a, tgt_b],
            [src_a, src_b],
        )
        if not blk.is_zero():
            maps[n] = blk
    return FilteredHomotopy(r, M, M, maps)


# -- representing objects and generating sets -------------------------------------


def gen_Z(field: Field, p: int, n: int, r: int) -> FilteredComplex:
    """Two-term complex R_(p)^n -> R_(p-r)^{n+1} with identity differential."""
    if r < 0:
        raise InvariantError("gen_Z needs r >= 0")
    return from_weights(
        field,
        {n: [p], n + 1: [p - r]},
        {n: ExactMatrix.identity(field, 1)},
    )


def gen_B(field: Field, p: int, n: int, r: int) -> FilteredComplex:
    """Z_{r-1}(p+r-1, n-1) + Z_{r-1}(p-1, n); defined for r >= 1."""
    if r < 1:
        raise InvariantError("gen_B needs r >= 1")
    return direct_sum(gen_Z(field, p + r - 1, n - 1, r - 1), gen_Z(field, p - 1, n, r - 1))


def gen_phi(field: Field, p: int, n: int, r: int) -> FilteredMorphism:
    """The comparison Z_r(p,n) -> B_r(p,n), (1,1) in degree n."""
    if r < 1:
        raise InvariantError("gen_phi needs r >= 1")
    Z = gen_Z(field, p, n, r)
    B = gen_B(field, p, n, r)
    one = field.one()
    blocks = {
        n: ExactMatrix(field, [[one], [one]]),
        n + 1: ExactMatrix(field, [[one]]),
    }
    return FilteredMorphism(Z, B, blocks)


def gen_weight_inclusion(field: Field, p: int, n: int, r: int) -> FilteredMorphism:
    """Inclusion R_(p-r)^{n+1} -> Z_r(p,n) of the degree-(n+1) component."""
    src = from_weights(field, {n + 1: [p - r]}, {})
    Z = gen_Z(field, p, n, r)
    return FilteredMorphism(src, Z, {n + 1: ExactMatrix.identity(field, 1)})


FILTERED_SETS = ("I", "J", "Iprime", "Jprime", "Isecond", "Jsecond")


def generators(field: Field, set_id: str, r: int, window) -> list[FilteredMorphism]:
    """Generating (trivial) cofibrations with (p, n) over a finite window.

    window = (p_lo, p_hi, n_lo, n_hi).
    """
    p_lo, p_hi, n_lo, n_hi = window
    out = []

    def each(fn, k):
        for p in range(p_lo, p_hi + 1):
            for n in range(n_lo, n_hi + 1):
                out.append(fn(p, n, k))

    zero = zero_complex(field)

    def j_gen(p, n, k):
        return FilteredMorphism(zero, gen_Z(field, p, n, k), {})

    if set_id == "J" or set_id == "Jsecond":
        each(j_gen, r)
    elif set_id == "I":
        each(lambda p, n, k: gen_phi(field, p, n, k), r + 1)
    elif set_id == "Iprime":
        for k in range(0, r):
            each(j_gen, k)
        each(lambda p, n, k: gen_phi(field, p, n, k), r + 1)
    elif set_id == "Jprime":
        for k in range(0, r + 1):
            each(j_gen, k)
    elif set_id == "Isecond":
        each(lambda p, n, k: gen_weight_inclusion(field, p, n, k), r)
    else:
        raise InvariantError(f"unknown filtered generator set {set_id!r}")
    return out


# -- hom spaces as linear systems ---------------------------------------------------


def add_morphism_unknown(sys: BlockLinearSystem, A: FilteredComplex, B: FilteredComplex, tag):
    """Declare blocks for an unknown morphism A -> B plus its linear constraints.

    Unknowns are the standard-coordinate blocks (tag, n). Constraints: chain
    commutation and the adapted-basis zero pattern for filtration
    compatibility.
    """
    field = A.field
    degs = range(min(A.n_min, B.n_min), max(A.n_max, B.n_max) + 1)
    for n in degs:
        if A.dim(n) and B.dim(n):
            sys.add_block((tag, n), B.dim(n), A.dim(n))
    for n in degs:
        shape = (B.dim(n + 1), A.dim(n))
        if shape[0] == 0 or shape[1] == 0:
            continue
        sys.add_equation(
            shape,
            [
                (B.d(n), (tag, n), None, field.one()),
                (None, (tag, n + 1), A.d(n), field.neg(field.one())),
            ],
        )
    for n in degs:
        if A.dim(n) == 0 or B.dim(n) == 0:
            continue
        ws, wt = A.weights(n), B.weights(n)
        bad = [(rr, c) for c in range(A.dim(n)) for rr in range(B.dim(n)) if wt[rr] > ws[c]]
        if bad:
            sys.add_entry_zero([(B.basis_inv(n), (tag, n), A.basis_at(n), field.one())], bad)


def hom_solution_space(A: FilteredComplex, B: FilteredComplex):
    """(system, kernel) parametrizing Hom(A, B) in standard block coordinates."""
    sys = BlockLinearSystem(A.field)
    add_morphism_unknown(sys, A, B, "f")
    return sys, sys.kernel_space()


def z_element_morphism(Y: FilteredComplex, p: int, n: int, r: int, vec) -> FilteredMorphism:
    """The morphism Z_r(p,n) -> Y corresponding to vec in Z_r^{p,n+p}(Y)."""
    G = gen_Z(Y.field, p, n, r)
    blocks = {n: ExactMatrix.column(Y.field, list(vec))}
    if Y.dim(n + 1):
        blocks[n + 1] = ExactMatrix.column(Y.field, list(Y.d(n).apply(vec)))
    return FilteredMorphism(G, Y, blocks)


def b_element_morphism(Y: FilteredComplex, p: int, n: int, r: int, cvec, bvec) -> FilteredMorphism:
    """The morphism B_r(p,n) -> Y corresponding to the pair
    (b, c) with b in Z_{r-1}^{p-1,n+p-1}(Y), c in Z_{r-1}^{p+r-1,n+p+r-2}(Y).

    Standard coordinates of B_r(p,n) are (Z_{r-1}(p+r-1,n-1) | Z_{r-1}(p-1,n)),
    so degree n holds the columns (dc | b).
    """
    G = gen_B(Y.field, p, n, r)
    field = Y.field
    blocks = {}
    if Y.dim(n - 1):
        blocks[n - 1] = ExactMatrix.column(field, list(cvec))
    dn = Y.dim(n)
    if dn:
        dc = Y.d(n - 1).apply(cvec) if Y.dim(n - 1) else tuple([field.zero()] * dn)
        blocks[n] = ExactMatrix(field, [[dc[i], bvec[i]] for i in range(dn)], cols=2)
    if Y.dim(n + 1):
        db = Y.d(n).apply(bvec) if dn else tuple([field.zero()] * Y.dim(n + 1))
        blocks[n + 1] = ExactMatrix.column(field, list(db))
    return FilteredMorphism(G, Y, blocks)


def weight_element_morphism(Y: FilteredComplex, p: int, n: int, r: int, vec) -> FilteredMorphism:
    """The morphism R_(p-r)^{n+1} -> Y given by a d-closed vector in F_{p-r}Y^{n+1}."""
    src = from_weights(Y.field, {n + 1: [p - r]}, {})
    return FilteredMorphism(src, Y, {n + 1: ExactMatrix.column(Y.field, list(vec))})


def closed_weight_subspace(Y: FilteredComplex, w: int, m: int) -> Subspace:
    """F_w Y^m meet ker d: the value of Hom(R_(w)^m, -) at Y."""
    if Y.dim(m) == 0:
        return Subspace.zero(Y.field, 0)
    return Y.filtration(w, m).intersect(kernel(Y.d(m)))


def morphism_from_blocks(A: FilteredComplex, B: FilteredComplex, blocks: dict, check=True) -> FilteredMorphism:
    return FilteredMorphism(A, B, {n: m for (_tag, n), m in blocks.items()}, check=check)

