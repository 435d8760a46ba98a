"""Split octonions over GF(q) and the compression of their automorphism group
into the 6-dimensional symplectic representation.

The algebra uses the Zorn vector-matrix basis E1, E2, u1, u2, u3, w1, w2, w3:
an element (a, v; w, b) multiplies by

  (a,v;w,b)(a',v';w',b') =
      (aa' + v.w',  av' + b'v - w x w';  a'w + bw' + v x v',  bb' + w.v')

with norm N = ab - v.w.  Automorphism generators are derived, not copied:
the derivation algebra Der(O) is computed exactly as a kernel, derivations D
with (im D)(im D) = 0 integrate to unipotent automorphisms I + tD, and the
generated group must hit the order oracle q^6(q^6-1)(q^2-1) exactly.

For even q every automorphism fixes the unit and the trace-zero subspace and
so acts on the 6-dimensional quotient (trace zero mod center), where the norm
polarization becomes the standard alternating form: that quotient action is
the G2(q) < Sp6(q) of the factorization claims.
"""

from __future__ import annotations

import random

from . import linalg, oracles
from .ff import make_field
from .grpcore import GroupElt, GroupHandle, commutator_closure
from .quadspace import QuadSpace
from .constructions import assemble, build_omega_handle, build_sp_handle
from .ff import find_mu


class OctonionAlgebra:
    """Split octonions in the Zorn basis; q is the field order."""

    def __init__(self, q):
        p, f = (2, {2: 1, 4: 2}.get(q)) if q in (2, 4) else (3, 1)
        if q not in (2, 4):
            # odd q kept available for sanity tests only
            if q != 3:
                raise ValueError("supported field orders: 2, 4 (and 3 for tests)")
        self.field = make_field(p, f if q != 3 else 1)
        self.q = q
        self._check_identities()

    # basis order: E1, E2, u1, u2, u3, w1, w2, w3
    def unpack(self, x):
        return x[0], x[2:5], x[5:8], x[1]

    def pack(self, a, v, w, b):
        return (a, b) + tuple(v) + tuple(w)

    def _dot(self, x, y):
        F = self.field
        acc = 0
        for a, b in zip(x, y):
            acc = F.add(acc, F.mul(a, b))
        return acc

    def _cross(self, x, y):
        F = self.field
        return (
            F.sub(F.mul(x[1], y[2]), F.mul(x[2], y[1])),
            F.sub(F.mul(x[2], y[0]), F.mul(x[0], y[2])),
            F.sub(F.mul(x[0], y[1]), F.mul(x[1], y[0])),
        )

    def mul(self, x, y):
        F = self.field
        a1, v1, w1, b1 = self.unpack(x)
        a2, v2, w2, b2 = self.unpack(y)
        a = F.add(F.mul(a1, a2), self._dot(v1, w2))
        b = F.add(F.mul(b1, b2), self._dot(w1, v2))
        cross_w = self._cross(w1, w2)
        v = tuple(F.sub(F.add(F.mul(a1, c2), F.mul(b2, c1)), cw)
                  for c1, c2, cw in zip(v1, v2, cross_w))
        cross_v = self._cross(v1, v2)
        w = tuple(F.add(F.add(F.mul(a2, c1), F.mul(b1, c2)), cv)
                  for c1, c2, cv in zip(w1, w2, cross_v))
        return self.pack(a, v, w, b)

    def unit(self):
        return self.pack(1, (0, 0, 0), (0, 0, 0), 1)

    def norm(self, x):
        F = self.field
        a, v, w, b = self.unpack(x)
        return F.sub(F.mul(a, b), self._dot(v, w))

    def trace(self, x):
        return self.field.add(x[0], x[1])

    def basis(self):
        return [tuple(1 if j == i else 0 for j in range(8)) for i in range(8)]

    def _check_identities(self):
        rng = random.Random(0x0C70)
        F = self.field
        one = self.unit()
        for e in self.basis():
            assert self.mul(one, e) == e and self.mul(e, one) == e
        for _ in range(60):
            x = tuple(rng.randrange(F.q) for _ in range(8))
            y = tuple(rng.randrange(F.q) for _ in range(8))
            # alternative laws and norm multiplicativity
            assert self.mul(x, self.mul(x, y)) == self.mul(self.mul(x, x), y)
            assert self.mul(self.mul(y, x), x) == self.mul(y, self.mul(x, x))
            assert self.norm(self.mul(x, y)) == F.mul(self.norm(x),
                                                      self.norm(y))

    def is_automorphism(self, M):
        """Exact check g(xy) = g(x)g(y) on all basis pairs, g(1) = 1."""
        F = self.field
        basis = self.basis()
        if linalg.vec_mat(F, self.unit(), M) != self.unit():
            return False
        for x in basis:
            gx = linalg.vec_mat(F, x, M)
            for y in basis:
                gy = linalg.vec_mat(F, y, M)
                if linalg.vec_mat(F, self.mul(x, y), M) != self.mul(gx, gy):
                    return False
        return True

    def norm_space(self) -> QuadSpace:
        """The norm form as a QuadSpace (plus type, dimension 8)."""
        F = self.field
        units = self.basis()
        qmat = [[0] * 8 for _ in range(8)]
        for i in range(8):
            qmat[i][i] = self.norm(units[i])
        for i in range(8):
            for j in range(i + 1, 8):
                both = tuple(F.add(a, b) for a, b in zip(units[i], units[j]))
                qmat[i][j] = F.sub(F.sub(self.norm(both), qmat[i][i]),
                                   qmat[j][j])
        return QuadSpace(F, qmat)


def build_octonions(q) -> OctonionAlgebra:
    if q not in (2, 4):
        raise ValueError("desk-scale split octonions support q in {2, 4}")
    return OctonionAlgebra(q)


# ---------------------------------------------------------------------------
# automorphism generators from the derivation algebra
# ---------------------------------------------------------------------------

def derivation_basis(alg: OctonionAlgebra):
    """Basis of Der(O) = {D : D(xy) = D(x)y + x D(y)} (dimension 14)."""
    F = alg.field
    basis = alg.basis()
    # unknowns: 64 matrix entries D[i][j]; equations from all basis pairs
    rows = []
    for xi in range(8):
        for yi in range(8):
            prod = alg.mul(basis[xi], basis[yi])
            for coord in range(8):
                # D(xy)_coord - (D(x)y + x D(y))_coord = 0
                row = [0] * 64
                for j in range(8):
                    # D(xy) = sum_k (xy)_k D[k][.]
                    row[8 * j + coord] = F.add(row[8 * j + coord], 0)
                for k in range(8):
                    c = prod[k]
                    if c:
                        row[8 * k + coord] = F.add(row[8 * k + coord], c)
                # -(D(x) y)_coord: D(x) = row xi of D
                for j in range(8):
                    contrib = alg.mul(basis[j], basis[yi])[coord]
                    if contrib:
                        row[8 * xi + j] = F.sub(row[8 * xi + j], contrib)
                # -(x D(y))_coord
                for j in range(8):
                    contrib = alg.mul(basis[xi], basis[j])[coord]
                    if contrib:
                        row[8 * yi + j] = F.sub(row[8 * yi + j], contrib)
                if any(row):
                    rows.append(tuple(row))
    ker = linalg.kernel_basis(F, rows)
    mats = [tuple(tuple(vec[8 * i + j] for j in range(8)) for i in range(8))
            for vec in ker]
    return mats


def _im_product_vanishes(alg, D):
    """(im D)(im D) = 0, checked on a row-space basis."""
    F = alg.field
    reduced, _ = linalg.rref(F, [row for row in D if any(row)])
    for x in reduced:
        for y in reduced:
            if any(alg.mul(x, y)):
                return False
    return True


def unipotent_automorphisms(alg: OctonionAlgebra, patterns=None):
    """I + tD for derivations with (im D)(im D) = 0 and t in GF(q)*.

    For q = 4 the GF(2) patterns are reused (their image products vanish over
    any extension of GF(2)); every output is exact-checked.
    """
    F = alg.field
    if patterns is None:
        patterns = _gf2_patterns(OctonionAlgebra(2))
    out = []
    ident = linalg.identity(F, 8)
    for D in patterns:
        for t in range(1, F.q):
            rows = tuple(tuple(F.add(ident[i][j], F.mul(t, D[i][j]))
                               for j in range(8)) for i in range(8))
            try:
                linalg.mat_inv(F, rows)
            except ValueError:
                continue
            if alg.is_automorphism(rows):
                out.append(GroupElt(F, rows))
    return out


_GF2_PATTERN_CACHE = []


def _gf2_patterns(alg2):
    if not _GF2_PATTERN_CACHE:
        der = derivation_basis(alg2)
        if len(der) != 14:
            raise AssertionError("dim Der(O) over GF(2) must be 14")
        for code in range(1, 2 ** 14):
            D = [[0] * 8 for _ in range(8)]
            c = code
            k = 0
            while c:
                if c & 1:
                    for i in range(8):
                        for j in range(8):
                            D[i][j] ^= der[k][i][j]
                c >>= 1
                k += 1
            Dt = tuple(tuple(row) for row in D)
            if _im_product_vanishes(alg2, Dt):
                _GF2_PATTERN_CACHE.append(Dt)
            if len(_GF2_PATTERN_CACHE) >= 120:
                break
    return _GF2_PATTERN_CACHE


def swap_automorphism(alg: OctonionAlgebra):
    """(a, v; w, b) -> (b, w; v, a); an automorphism in characteristic 2,
    lying outside the unipotent-generated subgroup when q = 2."""
    if alg.field.p != 2:
        raise ValueError("the swap map is only an automorphism for even q")
    perm = [1, 0, 5, 6, 7, 2, 3, 4]  # E1<->E2, u_i<->w_i in the packing
    rows = tuple(tuple(1 if j == perm[i] else 0 for j in range(8))
                 for i in range(8))
    if not alg.is_automorphism(rows):
        raise AssertionError("swap map failed the automorphism predicate")
    return GroupElt(alg.field, rows)


def torus_automorphism(alg: OctonionAlgebra, t1, t2):
    """Diagonal automorphism v_i -> t_i v_i, w_i -> t_i^-1 w_i, t1 t2 t3 = 1."""
    F = alg.field
    t3 = F.inv(F.mul(t1, t2))
    diag = [1, 1, t1, t2, t3, F.inv(t1), F.inv(t2), F.inv(t3)]
    rows = tuple(tuple(diag[i] if i == j else 0 for j in range(8))
                 for i in range(8))
    if not alg.is_automorphism(rows):
        raise AssertionError("torus map failed the automorphism predicate")
    return GroupElt(F, rows)


_G2_CACHE = {}


def build_g2_octonion_action(q, seed=0) -> GroupHandle:
    """G2(q) acting on the 8-dimensional octonion space, oracle-checked."""
    key = ("oct", q)
    if key in _G2_CACHE:
        return _G2_CACHE[key]
    alg = build_octonions(q)
    F = alg.field
    patterns = _gf2_patterns(OctonionAlgebra(2))
    gens = unipotent_automorphisms(alg, patterns=patterns)
    gens.append(swap_automorphism(alg))
    if q > 2:
        gens.append(torus_automorphism(alg, F.generator, 1))
    h = assemble(F, 8, gens, oracles.g2_order(q), f"G2({q})oct", seed=seed)
    for g in h.gens:
        if not alg.is_automorphism(g.matrix):
            raise AssertionError("generator fails the automorphism predicate")
    _G2_CACHE[key] = h
    return h


# ---------------------------------------------------------------------------
# the 6-dimensional symplectic quotient (q even)
# ---------------------------------------------------------------------------

def _quotient_rows(alg, M):
    """Induced action on trace-zero mod center, basis u1,w1,u2,w2,u3,w3."""
    F = alg.field
    idx = [2, 5, 3, 6, 4, 7]  # u1, w1, u2, w2, u3, w3 in the Zorn packing
    rows = []
    for i in idx:
        unit = tuple(1 if j == i else 0 for j in range(8))
        img = linalg.vec_mat(F, unit, M)
        if alg.trace(img) != 0:
            raise AssertionError("automorphism does not preserve trace zero")
        rows.append(tuple(img[j] for j in idx))
    return tuple(rows)


def g2_symplectic(q, seed=0) -> GroupHandle:
    """G2(q) < Sp6(q) on the quotient, with the standard alternating form."""
    key = ("sp6", q)
    if key in _G2_CACHE:
        return _G2_CACHE[key]
    if q % 2 != 0:
        raise ValueError("the symplectic compression needs q even")
    alg = build_octonions(q)
    F = alg.field
    oct_handle = build_g2_octonion_action(q, seed=seed)
    B = None
    from .constructions import sp_standard_form
    B = sp_standard_form(F, 6)
    units = [tuple(1 if j == i else 0 for j in range(6)) for i in range(6)]
    gens = []
    for g in oct_handle.gens:
        rows = _quotient_rows(alg, g.matrix)
        for i in range(6):
            for j in range(6):
                if B(rows[i], rows[j]) != B(units[i], units[j]):
                    raise AssertionError("quotient action is not symplectic")
        gens.append(GroupElt(F, rows))
    h = assemble(F, 6, gens, oracles.g2_order(q), f"G2({q})<Sp6", seed=seed,
                 slim=False)
    _G2_CACHE[key] = h
    return h


def g2_derived(q, seed=0) -> GroupHandle:
    """G2(q)' (index 2 for q = 2, equal to G2(q) otherwise)."""
    h = g2_symplectic(q, seed=seed)
    target = oracles.g2_order(q) // (2 if q == 2 else 1)
    if target == h.order():
        return h
    return commutator_closure(h, target, rng_seed=seed)


def sp6_handle(q, seed=0) -> GroupHandle:
    return build_sp_handle(make_field(*_pf_of(q)), 6, seed=seed)


def _pf_of(q):
    p = 2 if q % 2 == 0 else 3
    f = 0
    n = q
    while n > 1:
        n //= p
        f += 1
    return p, f


def omega6_in_sp6(q, eps, seed=0) -> GroupHandle:
    """Omega6^eps(q) < Sp6(q), q even: the isometries of a quadratic form
    polarizing to the standard alternating form."""
    F = make_field(*_pf_of(q))
    if eps == "+":
        space = QuadSpace.plus_type(F, 3)
        target = oracles.omega_plus_order(q, 6)
        name = f"Omega6+({q})<Sp6"
    else:
        mu = find_mu(F).value
        qmat = [[0] * 6 for _ in range(6)]
        qmat[0][1] = 1
        qmat[2][3] = 1
        qmat[4][4] = 1
        qmat[4][5] = 1
        qmat[5][5] = mu
        space = QuadSpace(F, qmat)
        target = oracles.omega_minus_order(q, 6)
        name = f"Omega6-({q})<Sp6"
    h = build_omega_handle(space, target, name, seed=seed)
    return h, space


def minus_type_space6(q):
    return omega6_in_sp6(q, "-")[1]
