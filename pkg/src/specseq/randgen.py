"""Seeded random instances for the property suites.

Random objects are direct sums of the representing generators conjugated by
random structure-preserving isomorphisms: filtration-preserving invertible
matrices per degree for filtered complexes, bidegree-preserving invertible
matrices per spot for bicomplexes. This guarantees d^2 = 0, commutation and
filtration compatibility by construction while producing non-trivial pages.

Morphisms come either from closed constructions with known classification
(projections off acyclic summands, inclusions, compositions) or as uniform
samples from the full Hom solution space of a pair of objects.
"""

from __future__ import annotations

import random

from .fields import GF, QQ, Field
from .linalg import BlockLinearSystem, ExactMatrix
from . import bicomplex as bx
from . import cylinders as cyl
from . import filtered as flt

FIELD_POOL = (GF(2), GF(5), GF(101), QQ)


def make_rng(seed) -> random.Random:
    return random.Random(seed)


def pick_field(rng: random.Random) -> Field:
    return FIELD_POOL[rng.randrange(len(FIELD_POOL))]


def random_scalar(rng, field, small=3):
    if field is QQ:
        return QQ.of(rng.randrange(-small, small + 1))
    return field.of(rng.randrange(0, getattr(field, "p", small)))


def random_matrix(rng, field, rows, cols, small=3) -> ExactMatrix:
    return ExactMatrix(field, [[random_scalar(rng, field, small) for _ in range(cols)] for _ in range(rows)], cols=cols)


def random_invertible(rng, field, n, small=3) -> ExactMatrix:
    if n == 0:
        return ExactMatrix.zeros(field, 0, 0)
    while True:
        m = random_matrix(rng, field, n, n, small)
        if m.rank() == n:
            return m


def random_unit(rng, field):
    while True:
        c = random_scalar(rng, field)
        if not field.is_zero(c):
            return c


# -- filtered instances ---------------------------------------------------------------


def random_filtered(rng, field=None, summands=3, max_r=3, span=2, conjugate=True) -> flt.FilteredComplex:
    """Random direct sum of Z_k / B_k generators, optionally conjugated."""
    field = field or pick_field(rng)
    parts = []
    for _ in range(rng.randrange(1, summands + 1)):
        k = rng.randrange(0, max_r + 1)
        p = rng.randrange(-span, span + 1)
        n = rng.randrange(-span, span + 1)
        if k >= 1 and rng.random() < 0.35:
            parts.append(flt.gen_B(field, p, n, k))
        else:
            parts.append(flt.gen_Z(field, p, n, k))
    A = parts[0]
    for part in parts[1:]:
        A = flt.direct_sum(A, part)
    if rng.random() < 0.25:
        A, _ = flt.m_r(A, rng.randrange(0, max_r + 1))
    return conjugate_filtered(rng, A) if conjugate else A


def filtration_automorphism(rng, A: flt.FilteredComplex, n: int) -> ExactMatrix:
    """Random invertible T in adapted coordinates with T(F_p) = F_p."""
    field = A.field
    d = A.dim(n)
    ws = A.weights(n)
    data = [[field.zero()] * d for _ in range(d)]
    # block upper-triangular over the weight grouping, in adapted order
    groups: dict = {}
    for i, w in enumerate(ws):
        groups.setdefault(w, []).append(i)
    for w, idx in groups.items():
        blk = random_invertible(rng, field, len(idx))
        for a, ia in enumerate(idx):
            for b, ib in enumerate(idx):
                data[ia][ib] = blk.data[a][b]
    for i in range(d):
        for j in range(d):
            if ws[i] < ws[j]:
                data[i][j] = random_scalar(rng, field)
    return ExactMatrix(field, data, cols=d)


def conjugate_filtered(rng, A: flt.FilteredComplex) -> flt.FilteredComplex:
    """Transport of structure along a random filtration-preserving iso."""
    if flt.is_zero(A):
        return A
    field = A.field
    smaps = {}
    for n in A.degrees():
        if A.dim(n) == 0:
            continue
        T = filtration_automorphism(rng, A, n)
        smaps[n] = A.basis_at(n) @ T @ A.basis_inv(n)
    basis, diff = {}, {}
    for n in A.degrees():
        if A.dim(n) == 0:
            continue
        basis[n] = smaps[n] @ A.basis_at(n)
        if A.dim(n + 1):
            diff[n] = smaps[n + 1] @ A.d(n) @ smaps[n].inverse()
    return flt.FilteredComplex(
        field, (A.n_min, A.n_max), (A.p_min, A.p_max), dict(A.dims), basis,
        {n: A.jumps[n] for n in A.jumps}, diff,
    )


def random_filtered_morphism(rng, A: flt.FilteredComplex, B: flt.FilteredComplex) -> flt.FilteredMorphism:
    """Uniform sample from the Hom solution space."""
    sys, ker = flt.hom_solution_space(A, B)
    if ker.dim == 0:
        return flt.zero_morphism(A, B)
    coeffs = [random_scalar(rng, A.field) for _ in range(ker.dim)]
    vec = ker.basis @ ExactMatrix.column(A.field, coeffs)
    blocks = sys.vector_to_blocks(vec.col(0))
    return flt.morphism_from_blocks(A, B, blocks)


def random_filtered_weq(rng, field, r, summands=2) -> flt.FilteredMorphism:
    """A morphism in E_r by construction: projection off an M_k summand,
    inclusion into one, an isomorphism, or a composite."""
    A = random_filtered(rng, field, summands=summands)
    kind = rng.randrange(3)
    k = rng.randrange(0, r + 1)
    if kind == 0:
        C = random_filtered(rng, field, summands=1)
        M, _ = flt.m_r(C, k)
        return flt.summand_projection(A, M, "A")
    if kind == 1:
        C = random_filtered(rng, field, summands=1)
        M, _ = flt.m_r(C, k)
        return flt.summand_inclusion(A, M, "A")
    return filtered_iso(rng, A)[1]


def random_filtered_fibration(rng, field, r, trivial=False, summands=2) -> flt.FilteredMorphism:
    """Z_r-surjective morphism; trivial=True also forces membership in E_r."""
    B = random_filtered(rng, field, summands=summands)
    if trivial:
        extra, _ = flt.m_r(random_filtered(rng, field, summands=1), rng.randrange(0, r + 1))
    else:
        extra = random_filtered(rng, field, summands=1)
    return flt.summand_projection(B, extra, "A")


def random_filtered_homotopy(rng, A: flt.FilteredComplex, B: flt.FilteredComplex, r: int):
    """Sample h with the r-shift pattern such that dh + hd is a morphism.

    Returns the homotopy; pair it with any f to get g = f + dh + hd.
    """
    field = A.field
    sys = BlockLinearSystem(field)
    degs = list(range(min(A.n_min, B.n_min), max(A.n_max, B.n_max) + 2))
    for n in degs:
        if A.dim(n) and B.dim(n - 1):
            sys.add_block(("h", n), B.dim(n - 1), A.dim(n))
    one = field.one()
    for n in degs:
        # r-shift pattern of h itself
        if A.dim(n) and B.dim(n - 1):
            ws, wt = A.weights(n), B.weights(n - 1)
            bad = [(rr, c) for c in range(A.dim(n)) for rr in range(B.dim(n - 1)) if wt[rr] > ws[c] + r]
            if bad:
                sys.add_entry_zero([(B.basis_inv(n - 1), ("h", n), A.basis_at(n), one)], bad)
        # filtration compatibility of dh + hd
        if A.dim(n) and B.dim(n):
            ws, wt = A.weights(n), B.weights(n)
            bad = [(rr, c) for c in range(A.dim(n)) for rr in range(B.dim(n)) if wt[rr] > ws[c]]
            if bad:
                sys.add_entry_zero(
                    [
                        (B.basis_inv(n) @ B.d(n - 1), ("h", n), A.basis_at(n), one),
                        (B.basis_inv(n), ("h", n + 1), A.d(n) @ A.basis_at(n), one),
                    ],
                    bad,
                )
    ker = sys.kernel_space()
    if ker.dim == 0:
        return flt.FilteredHomotopy(r, A, B, {})
    coeffs = [random_scalar(rng, field) for _ in range(ker.dim)]
    vec = ker.basis @ ExactMatrix.column(field, coeffs)
    blocks = sys.vector_to_blocks(vec.col(0))
    return flt.FilteredHomotopy(r, A, B, {n: m for (_t, n), m in blocks.items()})


def homotopy_displacement(h: flt.FilteredHomotopy) -> flt.FilteredMorphism:
    """dh + hd as a morphism from h.source to h.target."""
    A, B = h.source, h.target
    blocks = {}
    for n in range(min(A.n_min, B.n_min), max(A.n_max, B.n_max) + 1):
        if A.dim(n) == 0 or B.dim(n) == 0:
            continue
        blocks[n] = (B.d(n - 1) @ h.block(n)) + (h.block(n + 1) @ A.d(n))
    return flt.FilteredMorphism(A, B, blocks)


# -- bicomplex instances -----------------------------------------------------------------


def random_bicomplex(rng, field=None, summands=3, max_r=3, span=2, conjugate=True) -> bx.Bicomplex:
    """Random direct sum of D0 / ZW / BW generators, optionally conjugated,
    with an occasional cone or cylinder thrown in."""
    field = field or pick_field(rng)
    parts = []
    for _ in range(rng.randrange(1, summands + 1)):
        k = rng.randrange(0, max_r + 1)
        i = rng.randrange(-span, span + 1)
        j = rng.randrange(-span, span + 1)
        roll = rng.random()
        if roll < 0.25:
            parts.append(bx.gen_D0(field, i, j))
        elif roll < 0.45 and k >= 1:
            parts.append(bx.gen_BW(field, k, i, j))
        else:
            parts.append(bx.gen_ZW(field, k, i, j))
    A = parts[0]
    for part in parts[1:]:
        A = bx.direct_sum(A, part)
    roll = rng.random()
    if roll < 0.15:
        A = cyl.cone(A, rng.randrange(0, max_r + 1)).object
    elif roll < 0.25:
        A = cyl.cylinder(A, rng.randrange(0, max_r + 1)).object
    return conjugate_bicomplex(rng, A) if conjugate else A


def conjugate_bicomplex(rng, A: bx.Bicomplex) -> bx.Bicomplex:
    field = A.field
    smaps = {k: random_invertible(rng, field, d) for k, d in A.dims.items()}

    def s_at(i, j):
        m = smaps.get((i, j))
        return m if m is not None else ExactMatrix.zeros(field, A.dim(i, j), A.dim(i, j))

    d0 = {}
    for (i, j), m in A.d0.items():
        d0[(i, j)] = s_at(i, j + 1) @ m @ smaps[(i, j)].inverse()
    d1 = {}
    for (i, j), m in A.d1.items():
        d1[(i, j)] = s_at(i - 1, j) @ m @ smaps[(i, j)].inverse()
    return bx.Bicomplex(field, dict(A.dims), d0, d1)


def bicomplex_iso(rng, A: bx.Bicomplex):
    """(B, f) with f : A -> B a random isomorphism."""
    field = A.field
    smaps = {k: random_invertible(rng, field, d) for k, d in A.dims.items()}
    # stored differentials are nonzero, so both endpoints of each block exist
    d0 = {(i, j): smaps[(i, j + 1)] @ m @ smaps[(i, j)].inverse() for (i, j), m in A.d0.items()}
    d1 = {(i, j): smaps[(i - 1, j)] @ m @ smaps[(i, j)].inverse() for (i, j), m in A.d1.items()}
    B = bx.Bicomplex(field, dict(A.dims), d0, d1)
    return B, bx.BicomplexMorphism(A, B, smaps)


def filtered_iso(rng, A: flt.FilteredComplex):
    """(B, f) with f : A -> B a random filtered isomorphism."""
    B = conjugate_filtered(rng, A)
    blocks = {}
    for n in A.degrees():
        if A.dim(n) == 0:
            continue
        blocks[n] = B.basis_at(n) @ A.basis_inv(n)
    return B, flt.FilteredMorphism(A, B, blocks)


def random_bicomplex_morphism(rng, A: bx.Bicomplex, B: bx.Bicomplex) -> bx.BicomplexMorphism:
    """Uniform sample from the Hom solution space."""
    field = A.field
    sys = BlockLinearSystem(field)
    bx.add_morphism_unknown(sys, A, B, "f")
    ker = sys.kernel_space()
    if ker.dim == 0:
        return bx.zero_morphism(A, B)
    coeffs = [random_scalar(rng, field) for _ in range(ker.dim)]
    vec = ker.basis @ ExactMatrix.column(field, coeffs)
    blocks = sys.vector_to_blocks(vec.col(0))
    return bx.BicomplexMorphism(A, B, {k: m for (_t, k), m in blocks.items()})


def random_bicomplex_weq(rng, field, r, summands=2) -> bx.BicomplexMorphism:
    """A morphism in E_r by construction."""
    A = random_bicomplex(rng, field, summands=summands)
    kind = rng.randrange(3)
    if kind == 0:
        D = cyl.cone(random_bicomplex(rng, field, summands=1), rng.randrange(0, r + 1)).object
        return bx.summand_projection(A, D, "A")
    if kind == 1:
        D = cyl.cone(random_bicomplex(rng, field, summands=1), rng.randrange(0, r + 1)).object
        return bx.summand_inclusion(A, D, "A")
    _B, f = bicomplex_iso(rng, A)
    return f


def random_bicomplex_fibration(rng, field, r, trivial=False, summands=2) -> bx.BicomplexMorphism:
    """f and ZW_r(f) surjective; trivial=True also forces membership in E_r."""
    B = random_bicomplex(rng, field, summands=summands)
    if trivial:
        k = rng.randrange(0, r + 1)
        extra = cyl.cone(random_bicomplex(rng, field, summands=1), k).object
    else:
        extra = random_bicomplex(rng, field, summands=1)
    return bx.summand_projection(B, extra, "A")


def random_bicomplex_homotopy(rng, A: bx.Bicomplex, B: bx.Bicomplex, r: int) -> dict:
    """Sample components (h_i) of an r-homotopy A -> B (independent of f, g)."""
    field = A.field
    sys = BlockLinearSystem(field)
    spots = sorted(set(A.dims) | set(B.dims))
    rng_i = range(0, 1) if r == 0 else range(1, r + 1)
    shift = (lambda i: (i, -1)) if r == 0 else (lambda i: (i, i - 1))
    for i in rng_i:
        di, dj = shift(i)
        for (s, t) in spots:
            if A.dim(s, t) and B.dim(s + di, t + dj):
                sys.add_block(("h", i, s, t), B.dim(s + di, t + dj), A.dim(s, t))
    one = field.one()
    neg = field.neg(one)
    if r == 0:
        for (s, t) in spots:
            # d1 h = h d1
            sys.add_equation(
                (B.dim(s - 1, t - 1), A.dim(s, t)),
                [
                    (B.d1_at(s, t - 1), ("h", 0, s, t), None, one),
                    (None, ("h", 0, s - 1, t), A.d1_at(s, t), neg),
                ],
            )
    else:
        for i in range(1, r):
            sgn = one if i % 2 == 0 else neg
            for (s, t) in spots:
                sys.add_equation(
                    (B.dim(s + i, t + i), A.dim(s, t)),
                    [
                        (B.d1_at(s + i + 1, t + i), ("h", i + 1, s, t), None, one),
                        (None, ("h", i + 1, s - 1, t), A.d1_at(s, t), sgn),
                        (B.d0_at(s + i, t + i - 1), ("h", i, s, t), None, neg),
                        (None, ("h", i, s, t + 1), A.d0_at(s, t), field.neg(sgn)),
                    ],
                )
        sgn = one if r % 2 == 0 else neg
        for (s, t) in spots:
            sys.add_equation(
                (B.dim(s + r, t + r), A.dim(s, t)),
                [
                    (B.d0_at(s + r, t + r - 1), ("h", r, s, t), None, sgn),
                    (None, ("h", r, s, t + 1), A.d0_at(s, t), one),
                ],
            )
    ker = sys.kernel_space()
    components: dict = {i: {} for i in rng_i}
    if ker.dim == 0:
        return components
    coeffs = [random_scalar(rng, field) for _ in range(ker.dim)]
    vec = ker.basis @ ExactMatrix.column(field, coeffs)
    blocks = sys.vector_to_blocks(vec.col(0))
    for (_t, i, s, t), m in blocks.items():
        components[i][(s, t)] = m
    return components


def bicomplex_homotopy_displacement(A, B, r, components) -> bx.BicomplexMorphism:
    """d1 h_1 + h_1 d1 (or d0 h + h d0 for r = 0) as a morphism A -> B."""
    field = A.field
    blocks = {}
    i = 1 if r else 0
    fam = components.get(i, {})

    def fb(spot, di, dj):
        m = fam.get(spot)
        if m is None:
            s, t = spot
            return ExactMatrix.zeros(field, B.dim(s + di, t + dj), A.dim(s, t))
        return m

    for (s, t) in set(A.dims) | set(B.dims):
        if A.dim(s, t) == 0 or B.dim(s, t) == 0:
            continue
        if r == 0:
            blk = (B.d0_at(s, t - 1) @ fb((s, t), 0, -1)) + (fb((s, t + 1), 0, -1) @ A.d0_at(s, t))
        else:
            blk = (B.d1_at(s + 1, t) @ fb((s, t), 1, 0)) + (fb((s - 1, t), 1, 0) @ A.d1_at(s, t))
        blocks[(s, t)] = blk
    return bx.BicomplexMorphism(A, B, blocks)
