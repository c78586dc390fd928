"""r-cylinders, double mapping cylinders, r-cones and r-homotopies for
bicomplexes, including the explicit contraction of the r-cone.

The closed-form cylinder slot order at bidegree (p, q) is
    (a_0 | a_1 .. a_{r-1} | b_1 .. b_r | b_0)
with a_0 from B (the i_- side), a_i at (p-i, q-i), b_i at (p-i, q+1-i) and
b_0 from C (the i_+ side). For r = 0 the slots are (a_0 | c | b_0) with c at
(p, q+1). The differentials are exactly the displayed double-cylinder
formulas; the tensor description Cyl_r (x) A is kept as an independent
cross-check, not as the construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bigraded import InvariantError
from .fields import Field
from .linalg import ExactMatrix, Subspace, image, quotient
from .bicomplex import (
    Bicomplex,
    BicomplexMorphism,
    compose,
    direct_sum,
    identity_morphism,
    summand_inclusion,
    zero_bicomplex,
    zero_morphism,
)


def gen_Cyl(field: Field, r: int) -> Bicomplex:
    """The representing r-cylinder; spot (0,0) is R e_- + R e_+ in that order."""
    if r < 0:
        raise InvariantError("gen_Cyl needs r >= 0")
    one = ExactMatrix.identity(field, 1)
    if r == 0:
        dims = {(0, 0): 2, (0, -1): 1}
        d0 = {(0, -1): ExactMatrix.from_ints(field, [[-1], [1]])}
        return Bicomplex(field, dims, d0, {})
    dims = {(0, 0): 2}
    d0, d1 = {}, {}
    for i in range(1, r):
        dims[(i, i)] = 1
    for i in range(1, r + 1):
        dims[(i, i - 1)] = 1
    for i in range(1, r):
        d0[(i, i - 1)] = one
    for i in range(2, r + 1):
        d1[(i, i - 1)] = one
    d1[(1, 0)] = ExactMatrix.from_ints(field, [[-1], [1]])
    return Bicomplex(field, dims, d0, d1)


def _cyl_slots(B: Bicomplex, A: Bicomplex, C: Bicomplex, r: int, p: int, q: int):
    """(name, source complex, source spot) per slot of Cyl_r(f,g)^{p,q}."""
    slots = [("a0", B, (p, q))]
    if r == 0:
        slots.append(("c", A, (p, q + 1)))
    else:
        for i in range(1, r):
            slots.append((("a", i), A, (p - i, q - i)))
        for i in range(1, r + 1):
            slots.append((("b", i), A, (p - i, q + 1 - i)))
    slots.append(("b0", C, (p, q)))
    return slots


@dataclass
class DoubleCylinder:
    """Cyl_r(f, g) with its structural maps and slot bookkeeping."""

    r: int
    f: BicomplexMorphism
    g: BicomplexMorphism
    object: Bicomplex
    into_left: BicomplexMorphism   # B -> Cyl_r(f,g)
    into_right: BicomplexMorphism  # C -> Cyl_r(f,g)

    def slots(self, p: int, q: int):
        return _cyl_slots(self.f.target, self.f.source, self.g.target, self.r, p, q)

    def slot_offset(self, p: int, q: int, name):
        off = 0
        for (nm, cx, spot) in self.slots(p, q):
            if nm == name:
                return off, cx.dim(*spot)
            off += cx.dim(*spot)
        raise KeyError(name)


def double_cylinder(f: BicomplexMorphism, g: BicomplexMorphism, r: int) -> DoubleCylinder:
    """Closed-form double mapping r-cylinder of B <-f- A -g-> C."""
    if f.source is not g.source and f.source.dims != g.source.dims:
        raise InvariantError("double cylinder needs a common source")
    A, B, C = f.source, f.target, g.target
    field = A.field
    keys = set()
    for (s, t) in B.dims:
        keys.add((s, t))
    for (s, t) in C.dims:
        keys.add((s, t))
    for (s, t) in A.dims:
        if r == 0:
            keys.add((s, t - 1))
        else:
            for i in range(1, r):
                keys.add((s + i, t + i))
            for i in range(1, r + 1):
                keys.add((s + i, t + i - 1))
    dims = {}
    for (p, q) in keys:
        d = sum(cx.dim(*spot) for (_n, cx, spot) in _cyl_slots(B, A, C, r, p, q))
        if d:
            dims[(p, q)] = d

    def block_for(p, q, tp, tq, which):
        src = _cyl_slots(B, A, C, r, p, q)
        tgt = _cyl_slots(B, A, C, r, tp, tq)
        tindex = {nm: k for k, (nm, _c, _s) in enumerate(tgt)}
        grid = [[None] * len(src) for _ in tgt]

        def put(tname, ci, mat):
            ti = tindex[tname]
            prev = grid[ti][ci]
            grid[ti][ci] = mat if prev is None else prev + mat

        for ci, (nm, cx, spot) in enumerate(src):
            if which == "d0":
                if nm == "a0":
                    put("a0", ci, B.d0_at(*spot))
                elif nm == "b0":
                    put("b0", ci, C.d0_at(*spot))
                elif nm == "c":
                    # r = 0: d0(a0, c, b0) = (d0 a0 - f(c), -d0 c, d0 b0 + g(c))
                    put("a0", ci, -f.block(*spot))
                    put("c", ci, -A.d0_at(*spot))
                    put("b0", ci, g.block(*spot))
                elif nm[0] == "a":
                    i = nm[1]
                    m = A.d0_at(*spot)
                    put(("a", i), ci, -m if i % 2 else m)
                else:
                    i = nm[1]
                    m = A.d0_at(*spot)
                    put(("b", i), ci, m if (i - 1) % 2 == 0 else -m)
                    if i <= r - 1:
                        put(("a", i), ci, ExactMatrix.identity(A.field, A.dim(*spot)))
            else:
                if nm == "a0":
                    put("a0", ci, B.d1_at(*spot))
                elif nm == "b0":
                    put("b0", ci, C.d1_at(*spot))
                elif nm == "c":
                    put("c", ci, A.d1_at(*spot))
                elif nm[0] == "a":
                    i = nm[1]
                    m = A.d1_at(*spot)
                    put(("a", i), ci, -m if i % 2 else m)
                else:
                    i = nm[1]
                    m = A.d1_at(*spot)
                    put(("b", i), ci, -m if i % 2 else m)
                    if i == 1:
                        put("a0", ci, -f.block(*spot))
                        put("b0", ci, g.block(*spot))
                    elif i >= 2:
                        put(("a", i - 1), ci, ExactMatrix.identity(A.field, A.dim(*spot)))
        return ExactMatrix.block(
            field,
            grid,
            [cx.dim(*s) for (_n, cx, s) in tgt],
            [cx.dim(*s) for (_n, cx, s) in src],
        )

    d0, d1 = {}, {}
    for (p, q) in dims:
        if dims.get((p, q + 1)):
            m = block_for(p, q, p, q + 1, "d0")
            if not m.is_zero():
                d0[(p, q)] = m
        if dims.get((p - 1, q)):
            m = block_for(p, q, p - 1, q, "d1")
            if not m.is_zero():
                d1[(p, q)] = m
    obj = Bicomplex(field, dims, d0, d1)

    def side_inclusion(X, name):
        blocks = {}
        for (p, q), dx in X.dims.items():
            if dims.get((p, q), 0) == 0:
                continue
            off = 0
            for (nm, cx, spot) in _cyl_slots(B, A, C, r, p, q):
                d = cx.dim(*spot)
                if nm == name:
                    m = [[field.one() if (row == off + col) else field.zero() for col in range(dx)]
                         for row in range(dims[(p, q)])]
                    blocks[(p, q)] = ExactMatrix(field, m, cols=dx)
                    break
                off += d
        return blocks

    into_left = BicomplexMorphism(B, obj, side_inclusion(B, "a0"))
    into_right = BicomplexMorphism(C, obj, side_inclusion(C, "b0"))
    return DoubleCylinder(r, f, g, obj, into_left, into_right)


@dataclass
class Cylinder:
    """Cyl_r(A) with i_-, i_+ and the fold-factorizing projection."""

    r: int
    base: Bicomplex
    object: Bicomplex
    i_minus: BicomplexMorphism
    i_plus: BicomplexMorphism
    proj: BicomplexMorphism
    data: DoubleCylinder

    def slot_offset(self, p: int, q: int, name):
        return self.data.slot_offset(p, q, name)


def cylinder(A: Bicomplex, r: int) -> Cylinder:
    """Cyl_r(A) = Cyl_r(id_A, id_A) in closed form."""
    ida = identity_morphism(A)
    dc = double_cylinder(ida, ida, r)
    # fold-factorizing p: a_0 + b_0
    blocks = {}
    field = A.field
    for (p, q), d in A.dims.items():
        if dc.object.dim(p, q) == 0:
            continue
        off_a, _ = dc.slot_offset(p, q, "a0")
        off_b, _ = dc.slot_offset(p, q, "b0")
        m = [[field.zero()] * dc.object.dim(p, q) for _ in range(d)]
        for i in range(d):
            m[i][off_a + i] = field.one()
            m[i][off_b + i] = field.one()
        blocks[(p, q)] = ExactMatrix(field, m, cols=dc.object.dim(p, q))
    proj = BicomplexMorphism(dc.object, A, blocks)
    return Cylinder(r, A, dc.object, dc.into_left, dc.into_right, proj, dc)


def mapping_cone(f: BicomplexMorphism, r: int) -> DoubleCylinder:
    """Cyl_r(0, f) for f : A -> B."""
    z = zero_morphism(f.source, zero_bicomplex(f.source.field))
    return double_cylinder(z, f, r)


def cone(A: Bicomplex, r: int) -> DoubleCylinder:
    """C_r(A) = Cyl_r(0, id_A)."""
    z = zero_morphism(A, zero_bicomplex(A.field))
    return double_cylinder(z, identity_morphism(A), r)


def suspension(A: Bicomplex, r: int) -> Bicomplex:
    """s_r A = R e_{r,r-1} (x) A: shift by (r, r-1) with the tensor signs."""
    field = A.field
    dims = {(p + r, q + r - 1): d for (p, q), d in A.dims.items()}
    sgn0 = -1 if (r - 1) % 2 else 1
    sgn1 = -1 if r % 2 else 1
    d0 = {(p + r, q + r - 1): (m if sgn0 == 1 else -m) for (p, q), m in A.d0.items()}
    d1 = {(p + r, q + r - 1): (m if sgn1 == 1 else -m) for (p, q), m in A.d1.items()}
    return Bicomplex(field, dims, d0, d1, check=False)


def suspension_inv(A: Bicomplex, r: int) -> Bicomplex:
    field = A.field
    dims = {(p - r, q - r + 1): d for (p, q), d in A.dims.items()}
    sgn0 = -1 if (r - 1) % 2 else 1
    sgn1 = -1 if r % 2 else 1
    d0 = {(p - r, q - r + 1): (m if sgn0 == 1 else -m) for (p, q), m in A.d0.items()}
    d1 = {(p - r, q - r + 1): (m if sgn1 == 1 else -m) for (p, q), m in A.d1.items()}
    return Bicomplex(field, dims, d0, d1, check=False)


def phi_r(A: Bicomplex, r: int, cn: DoubleCylinder | None = None):
    """Projection C_r(A) -> s_r A onto the b_r slot (the c slot for r = 0)."""
    if cn is None:
        cn = cone(A, r)
    S = suspension(A, r)
    field = A.field
    blocks = {}
    slot = "c" if r == 0 else ("b", r)
    for (p, q), d in S.dims.items():
        if cn.object.dim(p, q) == 0:
            continue
        off, sd = cn.slot_offset(p, q, slot)
        if sd == 0:
            continue
        m = [[field.one() if col == off + row else field.zero() for col in range(cn.object.dim(p, q))]
             for row in range(sd)]
        blocks[(p, q)] = ExactMatrix(field, m, cols=cn.object.dim(p, q))
    return BicomplexMorphism(cn.object, S, blocks), cn


def psi_r(A: Bicomplex, r: int):
    """s_r^{-1} phi_r : s_r^{-1} C_r(A) -> A."""
    phi, cn = phi_r(A, r)
    src = suspension_inv(cn.object, r)
    blocks = {(p - r, q + 1 - r): m for (p, q), m in phi.blocks.items()}
    return BicomplexMorphism(src, A, blocks), cn


# -- r-homotopies -------------------------------------------------------------------


@dataclass
class HomotopyFamily:
    """Unpacked r-homotopy data: f, g and the bidegree-(i, i-1) components."""

    r: int
    f: BicomplexMorphism
    g: BicomplexMorphism
    components: dict  # i -> {source spot -> matrix into spot+(i,i-1)}


def _family_block(fam: dict, A: Bicomplex, B: Bicomplex, di: int, dj: int, spot) -> ExactMatrix:
    m = fam.get(spot)
    if m is None:
        s, t = spot
        return ExactMatrix.zeros(A.field, B.dim(s + di, t + dj), A.dim(s, t))
    return m


def assemble_homotopy(A: Bicomplex, B: Bicomplex, r: int, f: BicomplexMorphism,
                      g: BicomplexMorphism, components: dict) -> BicomplexMorphism:
    """Morphism Cyl_r(A) -> B from f, g and the h_i family.

    For r >= 1 the a_i columns carry k_i = d0 h_i + (-1)^i h_i d0; the
    morphism property of the result is exactly the displayed identity system,
    so construction with validation doubles as the identity check.
    """
    cyl = cylinder(A, r)
    field = A.field
    blocks = {}
    for (p, q), dcyl in cyl.object.dims.items():
        if B.dim(p, q) == 0:
            continue
        cols = []
        for (nm, _cx, spot) in cyl.data.slots(p, q):
            if nm == "a0":
                cols.append(f.block(*spot))
            elif nm == "b0":
                cols.append(g.block(*spot))
            elif nm == "c":
                cols.append(_family_block(components.get(0, {}), A, B, 0, -1, spot))
            elif nm[0] == "b":
                i = nm[1]
                cols.append(_family_block(components.get(i, {}), A, B, i, i - 1, spot))
            else:
                i = nm[1]
                s, t = spot
                hi = components.get(i, {})
                term1 = B.d0_at(s + i, t + i - 1) @ _family_block(hi, A, B, i, i - 1, spot)
                term2 = _family_block(hi, A, B, i, i - 1, (s, t + 1)) @ A.d0_at(s, t)
                k = term1 + (term2 if i % 2 == 0 else -term2)
                cols.append(k)
        blocks[(p, q)] = ExactMatrix.block(
            field,
            [cols],
            [B.dim(p, q)],
            [c.cols for c in cols],
        )
    return BicomplexMorphism(cyl.object, B, blocks)


def check_r_homotopy(A: Bicomplex, r: int, h: BicomplexMorphism,
                     f: BicomplexMorphism, g: BicomplexMorphism) -> bool:
    """h : Cyl_r(A) -> B is a morphism with h i_- = f and h i_+ = g."""
    cyl = cylinder(A, r)
    if h.source.dims != cyl.object.dims:
        return False
    left = compose(h, cyl.i_minus)
    right = compose(h, cyl.i_plus)
    keys = set(A.dims)
    return all(left.block(*k) == f.block(*k) for k in keys) and all(
        right.block(*k) == g.block(*k) for k in keys
    )


def unpack_homotopy(A: Bicomplex, r: int, h: BicomplexMorphism) -> HomotopyFamily:
    """Extract (f, g, h_i) from h : Cyl_r(A) -> B and re-verify the identities.

    Verifies, for r >= 1:
        d1 h_{i+1} + (-1)^i h_{i+1} d1 = d0 h_i + (-1)^i h_i d0   (1 <= i <= r-1)
        (-1)^r d0 h_r + h_r d0 = 0
        d1 h_1 + h_1 d1 = g - f
    and for r = 0: d0 h + h d0 = g - f, d1 h = h d1.
    """
    B = h.target
    field = A.field
    cyl = cylinder(A, r)
    fam: dict = {}
    fblocks, gblocks = {}, {}
    for (p, q) in cyl.object.dims:
        for (nm, _cx, spot) in cyl.data.slots(p, q):
            off, d = cyl.slot_offset(p, q, nm)
            if d == 0 or B.dim(p, q) == 0:
                continue
            blk = h.block(p, q).columns(range(off, off + d))
            if nm == "a0":
                fblocks[spot] = blk
            elif nm == "b0":
                gblocks[spot] = blk
            elif nm == "c":
                fam.setdefault(0, {})[spot] = blk
            elif nm[0] == "b":
                fam.setdefault(nm[1], {})[spot] = blk
    f = BicomplexMorphism(A, B, fblocks)
    g = BicomplexMorphism(A, B, gblocks)

    def fb(i, spot):
        return _family_block(fam.get(i, {}), A, B, i, i - 1 if r else -1, spot)

    if r == 0:
        for (s, t) in set(A.dims) | set(B.dims):
            lhs = B.d0_at(s, t - 1) @ fb(0, (s, t)) + fb(0, (s, t + 1)) @ A.d0_at(s, t)
            if lhs != (g.block(s, t) - f.block(s, t)):
                raise InvariantError("0-homotopy identity d0 h + h d0 = g - f fails")
            lhs = B.d1_at(s, t - 1) @ fb(0, (s, t))
            rhs = fb(0, (s - 1, t)) @ A.d1_at(s, t)
            if lhs != rhs:
                raise InvariantError("0-homotopy identity d1 h = h d1 fails")
        return HomotopyFamily(r, f, g, fam)

    spots = sorted(set(A.dims) | set(B.dims))
    for i in range(1, r):
        for (s, t) in spots:
            lhs1 = B.d1_at(s + i + 1, t + i) @ fb(i + 1, (s, t))
            lhs2 = fb(i + 1, (s - 1, t)) @ A.d1_at(s, t)
            lhs = lhs1 + (lhs2 if i % 2 == 0 else -lhs2)
            rhs1 = B.d0_at(s + i, t + i - 1) @ fb(i, (s, t))
            rhs2 = fb(i, (s, t + 1)) @ A.d0_at(s, t)
            rhs = rhs1 + (rhs2 if i % 2 == 0 else -rhs2)
            if lhs != rhs:
                raise InvariantError(f"homotopy ladder identity fails at step {i}")
    for (s, t) in spots:
        t1 = B.d0_at(s + r, t + r - 1) @ fb(r, (s, t))
        t2 = fb(r, (s, t + 1)) @ A.d0_at(s, t)
        lhs = (t1 if r % 2 == 0 else -t1) + t2
        if not lhs.is_zero():
            raise InvariantError("homotopy top identity (-1)^r d0 h_r + h_r d0 = 0 fails")
    for (s, t) in spots:
        lhs = B.d1_at(s + 1, t) @ fb(1, (s, t)) + fb(1, (s - 1, t)) @ A.d1_at(s, t)
        if lhs != (g.block(s, t) - f.block(s, t)):
            raise InvariantError("homotopy identity d1 h_1 + h_1 d1 = g - f fails")
    return HomotopyFamily(r, f, g, fam)


# -- the contraction of the r-cone ----------------------------------------------------


def contraction(A: Bicomplex, r: int):
    """The r-homotopy H : Cyl_r(C_r(A)) -> C_r(A) with H i = 0 + id.

    Built from the generator formulas on S = ZW_r(r, r-1) tensored with the
    identity of A; for r = 0 it is the usual cochain cone contraction.
    """
    cn = cone(A, r)
    C = cn.object
    field = A.field
    cylC = cylinder(C, r)

    # target slot layout of C_r(A) at a spot
    def cone_slots(p, q):
        return cn.slots(p, q)

    def cone_offset(p, q, name):
        return cn.slot_offset(p, q, name)

    if r == 0:
        # h0 : C^{p,q+1} -> C^{p,q}, (a, gamma) -> (gamma, 0)
        comp: dict = {0: {}}
        for (p, q) in C.dims:
            src = (p, q + 1)
            if C.dim(*src) == 0:
                continue
            m = [[field.zero()] * C.dim(*src) for _ in range(C.dim(p, q))]
            c_off, c_dim = cone_offset(p, q, "c")
            g_off, g_dim = cone_offset(*src, "b0")
            for k in range(min(c_dim, g_dim)):
                m[c_off + k][g_off + k] = field.one()
            comp[0][src] = ExactMatrix(field, m, cols=C.dim(*src))
        zc = zero_morphism(C, C)
        H = assemble_homotopy(C, C, 0, zc, identity_morphism(C), comp)
        return H, cn

    # rule table: (outer slot, inner cone slot) -> (target cone slot, sign exponent)
    def rule(outer, inner):
        if outer == "b0":
            return inner, 0
        if outer == "a0":
            return None, 0
        kind, k = outer
        if kind == "a":
            if inner == "b0":  # gamma = beta_{0,0}
                return ("a", k) if k <= r - 1 else None, 0
            ikind, i = inner
            if ikind == "a":
                return (("a", i + k) if i + k <= r - 1 else None), 0
            return (("b", i + k) if i + k <= r else None), k
        # outer b_m
        if inner == "b0":
            return ("b", k) if k <= r else None, 0
        ikind, i = inner
        if ikind == "a":
            return (("b", i + k) if i + k <= r else None), 0
        return None, 0

    blocks = {}
    for (p, q), dcyl in cylC.object.dims.items():
        if C.dim(p, q) == 0:
            continue
        rows = C.dim(p, q)
        m = [[field.zero()] * dcyl for _ in range(rows)]
        off = 0
        for (nm, _cx, spot) in cylC.data.slots(p, q):
            d = C.dim(*spot)
            if d == 0:
                continue
            # inner structure of C at `spot`
            ioff = 0
            for (inm, icx, ispot) in cone_slots(*spot):
                idim = icx.dim(*ispot)
                if idim == 0:
                    continue
                tgt, sexp = rule(nm, inm)
                if tgt is not None:
                    toff, tdim = cone_offset(p, q, tgt)
                    if tdim != idim:
                        raise InvariantError("contraction bookkeeping mismatch")
                    val = field.one() if sexp % 2 == 0 else field.neg(field.one())
                    for k in range(idim):
                        m[toff + k][off + ioff + k] = val
                ioff += idim
            off += d
        blk = ExactMatrix(field, m, cols=dcyl)
        if not blk.is_zero():
            blocks[(p, q)] = blk
    H = BicomplexMorphism(cylC.object, C, blocks)
    return H, cn


# -- quotients and pushouts ------------------------------------------------------------


def quotient_bicomplex(X: Bicomplex, subs: dict):
    """X / K for a differential-closed family of subspaces K^{p,q}.

    Returns the quotient with canonical bases and the projection morphism.
    """
    field = X.field
    quots = {}
    dims = {}
    for (p, q), d in X.dims.items():
        W = subs.get((p, q), Subspace.zero(field, d))
        qd = quotient(Subspace.full(field, d), W)
        quots[(p, q)] = qd
        if qd.dim:
            dims[(p, q)] = qd.dim
    d0, d1 = {}, {}
    for (p, q) in dims:
        qd = quots[(p, q)]
        up = quots.get((p, q + 1))
        if up and up.dim:
            d0[(p, q)] = up.project @ X.d0_at(p, q) @ qd.lift
        left = quots.get((p - 1, q))
        if left and left.dim:
            d1[(p, q)] = left.project @ X.d1_at(p, q) @ qd.lift
    Q = Bicomplex(field, dims, d0, d1)
    proj = BicomplexMorphism(X, Q, {k: quots[k].project for k in dims})
    return Q, proj


def pushout_corner(f: BicomplexMorphism, g: BicomplexMorphism):
    """Pushout of B <-f- A -g-> C with its two structure maps.

    Computed as (B + C) / {(f(a), -g(a))}.
    """
    A, B, C = f.source, f.target, g.target
    S = direct_sum(B, C)
    iB = summand_inclusion(B, C, "A")
    iC = summand_inclusion(B, C, "B")
    subs = {}
    field = A.field
    for (p, q), d in A.dims.items():
        if S.dim(p, q) == 0:
            continue
        cols = (iB.block(p, q) @ f.block(p, q)) - (iC.block(p, q) @ g.block(p, q))
        subs[(p, q)] = image(cols)
    Q, proj = quotient_bicomplex(S, subs)
    return Q, compose(proj, iB), compose(proj, iC)


def cokernel(f: BicomplexMorphism):
    """coker(f) with its projection."""
    B = f.target
    subs = {k: image(f.block(*k)) for k in B.dims}
    return quotient_bicomplex(B, subs)
